"""Packet detection rate, per-class aggregation and report serialisation."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import __version__
from .detectors import VerdictKind
from .scenarios import GENERATOR_NAME, PAPER_MIX, Scenario
from .simnet import DetectionRecord
from .taxonomy import CLASS_INFO, AttackClass

FORMATS = ("jsonl", "csv", "text")
CSV_COLUMNS = ("class", "sent", "detected", "accepted", "ignored")

# Published comparison: normal, abnormal, detected, stated rate.
TABLE3 = {
    "RFC 826": (100, 1155, 115, 12),
    "CLCC": (100, 1155, 892, 77),
}
CLCC_PDR_RANGE = (70, 85)
BASELINE_PDR_RANGE = (5, 15)


class CountExceedsTotal(ValueError):
    pass


class UnknownFormat(ValueError):
    pass


@dataclass(frozen=True)
class Rate:
    """A percentage kept as an exact fraction; ``undefined`` marks a 0/0 rate reported as 0."""

    value: Fraction
    undefined: bool = False

    def __str__(self) -> str:
        q = (self.value * 10 + Fraction(1, 2)).__floor__()
        return f"{q // 10}.{q % 10}"

    def __float__(self) -> float:
        return float(self.value)


def pdr(apd: int, tmp: int) -> Rate:
    """Detected abnormal packets over abnormal packets sent, as a percentage."""
    if apd < 0 or tmp < 0:
        raise ValueError("counts must be non-negative")
    if apd > tmp:
        raise CountExceedsTotal(f"{apd} detected out of {tmp} sent")
    if tmp == 0:
        return Rate(Fraction(0), undefined=True)
    return Rate(Fraction(100 * apd, tmp))


@dataclass
class ClassCounts:
    sent: int = 0
    detected: int = 0
    accepted: int = 0
    ignored: int = 0
    reasons: dict[str, int] = field(default_factory=dict)

    def add(self, record: DetectionRecord) -> None:
        self.sent += 1
        if record.verdict_kind is VerdictKind.DETECTED:
            self.detected += 1
            key = str(record.reason)
            self.reasons[key] = self.reasons.get(key, 0) + 1
        elif record.verdict_kind is VerdictKind.ACCEPTED:
            self.accepted += 1
        else:
            self.ignored += 1


@dataclass
class Report:
    scenario_label: str
    detector_name: str
    per_class: dict[AttackClass, ClassCounts]
    pdr_percent: Rate
    apd: int
    tmp: int
    false_positives: int
    config_echo: dict
    seed: int
    generator: str = GENERATOR_NAME
    version: str = __version__


def scenario_echo(s: Scenario) -> dict:
    d = s.detector
    mix = {c.value: s.mix.get(c, 0) for c in AttackClass}
    uniform = dict(s.mix) == PAPER_MIX
    return {
        "label": s.label,
        "seed": s.seed,
        "generator": GENERATOR_NAME,
        "detector": {
            "kind": d.kind,
            "clear_interval": d.clear_interval,
            "fake_list_ttl": d.fake_list_ttl,
            "seed_static": d.seed_static,
        },
        "schedule": {"gap": s.gap, "link_delay": s.link_delay},
        "topology": {
            "subnet": str(s.topology.subnet),
            "router": f"{s.topology.router_ip} {s.topology.router_mac}",
            "attacker": s.topology.attacker_id,
            "hosts": {h.host_id: f"{h.ip} {h.mac}" for h in s.topology.hosts},
        },
        "mix": mix,
        "composition": "paper-mix: 100 normal + 105 per class x 11 (uniform split assumed)" if uniform else "custom",
    }


def build_report(records: Iterable[DetectionRecord], scenario: Scenario, detector_name: str | None = None) -> Report:
    """Aggregate the designated observer's verdict for every injected frame."""
    per_class: dict[AttackClass, ClassCounts] = {}
    for r in records:
        if r.injected_class is None or not r.designated:
            continue
        per_class.setdefault(r.injected_class, ClassCounts()).add(r)
    per_class = {c: per_class[c] for c in AttackClass if c in per_class}
    abnormal = [counts for c, counts in per_class.items() if c.abnormal]
    apd = sum(c.detected for c in abnormal)
    tmp = sum(c.sent for c in abnormal)
    normal = per_class.get(AttackClass.Normal)
    return Report(
        scenario_label=scenario.label,
        detector_name=detector_name or scenario.detector.kind,
        per_class=per_class,
        pdr_percent=pdr(apd, tmp),
        apd=apd,
        tmp=tmp,
        false_positives=normal.detected if normal else 0,
        config_echo=scenario_echo(scenario),
        seed=scenario.seed,
    )


# -- serialisation -------------------------------------------------------------------


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit_jsonl(r: Report) -> str:
    lines = [
        _dumps(
            {
                "record": "meta",
                "version": r.version,
                "label": r.scenario_label,
                "detector": r.detector_name,
                "seed": r.seed,
                "generator": r.generator,
                "config": r.config_echo,
            }
        )
    ]
    for cls, c in r.per_class.items():
        lines.append(
            _dumps(
                {
                    "record": "class",
                    "class": cls.value,
                    "sent": c.sent,
                    "detected": c.detected,
                    "accepted": c.accepted,
                    "ignored": c.ignored,
                    "reasons": c.reasons,
                }
            )
        )
    lines.append(
        _dumps(
            {
                "record": "summary",
                "apd": r.apd,
                "tmp": r.tmp,
                "pdr": str(r.pdr_percent),
                "pdr_exact": f"{r.pdr_percent.value.numerator}/{r.pdr_percent.value.denominator}",
                "pdr_undefined": r.pdr_percent.undefined,
                "false_positives": r.false_positives,
            }
        )
    )
    return "\n".join(lines) + "\n"


def _emit_csv(r: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for cls, c in r.per_class.items():
        w.writerow([cls.value, c.sent, c.detected, c.accepted, c.ignored])
    if r.per_class:
        w.writerow(["PDR", str(r.pdr_percent), "", "", ""])
    return buf.getvalue()


def _emit_text(r: Report) -> str:
    out = [
        f"report: {r.scenario_label}  detector={r.detector_name}  seed={r.seed}",
        f"generator: {r.generator}  version: {r.version}",
        "",
        f"{'class':<7}{'sent':>6}{'detected':>10}{'accepted':>10}{'ignored':>9}  reasons / detection situation",
    ]
    for cls, c in r.per_class.items():
        reasons = ", ".join(f"{k}={v}" for k, v in sorted(c.reasons.items())) or "-"
        out.append(f"{cls.value:<7}{c.sent:>6}{c.detected:>10}{c.accepted:>10}{c.ignored:>9}  {reasons}")
        if cls.abnormal:
            out.append(f"{'':<44}{CLASS_INFO[cls].situation}")
    flag = " (no abnormal frames; reported as 0)" if r.pdr_percent.undefined else ""
    out += [
        "",
        f"abnormal detected (APD): {r.apd}",
        f"abnormal sent (TMP):     {r.tmp}",
        f"PDR %:                   {r.pdr_percent}{flag}",
        f"false positives:         {r.false_positives}",
    ]
    return "\n".join(out) + "\n"


def emit(report: Report, fmt: str = "jsonl") -> bytes:
    fmt = {"json-lines": "jsonl", "jsonlines": "jsonl"}.get(fmt, fmt)
    if fmt == "jsonl":
        return _emit_jsonl(report).encode()
    if fmt == "csv":
        return _emit_csv(report).encode()
    if fmt == "text":
        return _emit_text(report).encode()
    raise UnknownFormat(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


def load_report(data: bytes | str) -> Report:
    """Parse the json-lines form written by :func:`emit`."""
    if isinstance(data, bytes):
        data = data.decode()
    meta = summary = None
    per_class: dict[AttackClass, ClassCounts] = {}
    for line in data.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        kind = obj.get("record")
        if kind == "meta":
            meta = obj
        elif kind == "class":
            per_class[AttackClass.parse(obj["class"])] = ClassCounts(
                obj["sent"], obj["detected"], obj["accepted"], obj["ignored"], dict(obj.get("reasons", {}))
            )
        elif kind == "summary":
            summary = obj
    if meta is None or summary is None:
        raise ValueError("not a report: missing meta or summary record")
    num, den = (int(x) for x in summary["pdr_exact"].split("/"))
    return Report(
        scenario_label=meta["label"],
        detector_name=meta["detector"],
        per_class=per_class,
        pdr_percent=Rate(Fraction(num, den), summary["pdr_undefined"]),
        apd=summary["apd"],
        tmp=summary["tmp"],
        false_positives=summary["false_positives"],
        config_echo=meta["config"],
        seed=meta["seed"],
        generator=meta["generator"],
        version=meta["version"],
    )


# -- comparison against the published table ------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def compare_table3(clcc: Report, baseline: Report) -> list[Check]:
    c, b = float(clcc.pdr_percent), float(baseline.pdr_percent)
    lo, hi = CLCC_PDR_RANGE
    blo, bhi = BASELINE_PDR_RANGE
    return [
        Check("clcc_pdr_range", lo <= c <= hi, f"CLCC PDR {clcc.pdr_percent}% in [{lo}, {hi}]"),
        Check("baseline_pdr_range", blo <= b <= bhi, f"baseline PDR {baseline.pdr_percent}% in [{blo}, {bhi}]"),
        Check("clcc_beats_baseline", c > b, f"CLCC {clcc.pdr_percent}% > baseline {baseline.pdr_percent}%"),
    ]


def table3_text(clcc: Report, baseline: Report) -> str:
    rows = [f"{'technique':<10}{'normal':>8}{'abnormal':>10}{'detected':>10}{'rate':>8}{'exact':>8}  source"]
    for name, (normal, abnormal, detected, stated) in TABLE3.items():
        rows.append(
            f"{name:<10}{normal:>8}{abnormal:>10}{detected:>10}{stated:>8}{str(pdr(detected, abnormal)):>8}  published"
        )
    for name, r in (("RFC 826", baseline), ("CLCC", clcc)):
        normal = r.per_class.get(AttackClass.Normal, ClassCounts()).sent
        rows.append(f"{name:<10}{normal:>8}{r.tmp:>10}{r.apd:>10}{'':>8}{str(r.pdr_percent):>8}  this run")
    return "\n".join(rows) + "\n"


# -- feature comparison table ------------------------------------------------------------

TECHNIQUES = ("RFC826", "SARP", "TARP", "EARP", "GARP", "Central Server", "Proposed")


@dataclass(frozen=True)
class FeatureMatrix:
    techniques: tuple[str, ...]
    rows: tuple[tuple[str, tuple[str, ...]], ...]
    footnote: str

    def cell(self, technique: str, feature: str) -> str:
        col = self.techniques.index(technique)
        for name, values in self.rows:
            if name == feature:
                return values[col]
        raise KeyError(feature)

    def as_dict(self) -> Mapping[str, Mapping[str, str]]:
        return {name: dict(zip(self.techniques, values)) for name, values in self.rows}

    def render(self) -> str:
        first = max(len(n) for n, _ in self.rows) + 2
        widths = [max(len(t), *(len(v[i]) for _, v in self.rows)) + 2 for i, t in enumerate(self.techniques)]
        lines = ["Features".ljust(first) + "".join(t.ljust(w) for t, w in zip(self.techniques, widths))]
        for name, values in self.rows:
            lines.append(name.ljust(first) + "".join(v.ljust(w) for v, w in zip(values, widths)))
        lines.append(self.footnote)
        return "\n".join(line.rstrip() for line in lines) + "\n"


def feature_matrix() -> FeatureMatrix:
    return FeatureMatrix(
        TECHNIQUES,
        (
            ("Cross Layer Inspection", ("No", "No", "No", "No", "No", "No", "Yes")),
            ("ARP Stateful", ("No", "Yes", "Yes", "Yes", "Yes", "Yes", "Yes")),
            ("ARP storm Prevention", ("No", "No", "Partial *", "Yes", "Yes", "Yes", "Partial")),
            ("Static-S and Dynamic-D entries", ("S&D", "D", "D", "S&D", "S&D", "S&D", "S&D")),
            ("Cryptographic", ("No", "Yes", "Yes", "No", "Yes", "Yes", "No")),
        ),
        "* leads to ticket flooding attack",
    )
