"""Classification-degradation metrics and comparison reports.

Quantifies how much a perturbation costs the classifier: the signed OOB
error gap, and per-class percentage degradation computed from misclassified
counts in the input and transform domains over the class size.
"""

from __future__ import annotations

from dataclasses import dataclass

from .data import ClassStats
from .forest import OobReport


def zeta(eta_input: float, eta_transform: float) -> float:
    """Signed error gap: input-domain error minus transform-domain error.

    Positive means the transform improved performance.
    """
    for e in (eta_input, eta_transform):
        if not 0 <= e <= 1:
            raise ValueError("errors must lie in [0, 1]")
    return eta_input - eta_transform


def pd_metric(idmc: int, tdmc: int, tot: int) -> float:
    """Per-class percentage degradation: 100 * (tdmc - idmc) / tot.

    idmc / tdmc are the misclassified counts in the input and transform
    domains, tot the class size. Negative values mean the transform
    improved that class.
    """
    if tot < 1:
        raise ValueError("tot must be >= 1")
    if idmc < 0 or tdmc < 0:
        raise ValueError("counts must be >= 0")
    return 100.0 * (tdmc - idmc) / tot


@dataclass
class DegradationReport:
    labels: tuple[int, ...]
    names: tuple[str, ...]
    idmc: tuple[int, ...]
    tdmc: tuple[int, ...]
    tot: tuple[int, ...]
    pd: tuple[float, ...]
    average_pd: float
    oob_input: float
    oob_transform: float
    missing_classes: tuple[int, ...] = ()   # in one report but not the other

    def pd_of(self, label: int) -> float:
        return self.pd[self.labels.index(label)]


def degradation_report(input_report: OobReport, transform_report: OobReport,
                       stats: ClassStats) -> DegradationReport:
    """Per-class pd table for two OOB reports over the same data.

    Classes present in only one report are listed as discrepancies and left
    out of the rows and the footer average. Class sizes come from stats, not
    from the reports' votable counts.
    """
    shared = sorted(set(input_report.labels) & set(transform_report.labels))
    if not shared:
        raise ValueError("reports share no classes")
    missing = tuple(sorted(set(input_report.labels) ^ set(transform_report.labels)))

    labels, names, idmcs, tdmcs, tots, pds = [], [], [], [], [], []
    for c in shared:
        i = input_report.labels.index(c)
        t = transform_report.labels.index(c)
        tot = stats.count_of(c)
        idmc = input_report.misclassified[i]
        tdmc = transform_report.misclassified[t]
        labels.append(c)
        names.append(input_report.names[i])
        idmcs.append(idmc)
        tdmcs.append(tdmc)
        tots.append(tot)
        pds.append(pd_metric(idmc, tdmc, tot))
    avg = sum(pds) / len(pds)
    return DegradationReport(
        labels=tuple(labels), names=tuple(names), idmc=tuple(idmcs),
        tdmc=tuple(tdmcs), tot=tuple(tots), pd=tuple(pds), average_pd=avg,
        oob_input=input_report.overall_oob,
        oob_transform=transform_report.overall_oob,
        missing_classes=missing)


def group_pd(report: DegradationReport, labels) -> float:
    """Mean pd over a subset of the report's classes."""
    labels = list(labels)
    if not labels:
        raise ValueError("empty class subset")
    unknown = set(labels) - set(report.labels)
    if unknown:
        raise ValueError(f"labels not in report: {sorted(unknown)}")
    return sum(report.pd_of(c) for c in labels) / len(labels)
