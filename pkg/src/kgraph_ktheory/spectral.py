"""Spectral-sequence pages, convergence certificates, and K-theory assembly.

The pipeline is: row schedule -> homology per row -> E^2 pages (real with
period 8 in q, complex with period 2) -> certify every candidate
differential zero -> read the K-groups off the diagonals, resolving
extensions.

Convergence is never assumed: each potentially nonzero differential must
carry an explicit certificate, and the only rules encoded are the ones the
underlying arguments actually license.  A differential admitting no
certificate makes the whole computation return "unknown" rather than a
guess; this genuinely happens from rank 6 on.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import gcd
from typing import Optional

from .abgroup import (
    ExtensionOutcome,
    FinAbGroup,
    ZERO_GROUP,
    resolve_extension,
)
from .homology import homology_all
from .intmat import IntMatrix
from .kgraph import (
    CoefficientRow,
    GraphSpec,
    InvalidGraphError,
    Involution,
    adjacency_matrices,
    involution_row_schedule,
    koszul_complex,
    validate,
)


class Part(Enum):
    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class E2Page:
    """One part of an E^2 page: groups at (p, q), p in 0..k, q mod period.

    ``entries[p][q]`` is the group at column p and (reduced) row q; the
    period is 8 for the real part and 2 for the complex part.
    """

    part: Part
    k: int
    entries: tuple[tuple[FinAbGroup, ...], ...]

    @property
    def period(self) -> int:
        return 8 if self.part is Part.REAL else 2

    def entry(self, p: int, q: int) -> FinAbGroup:
        if not 0 <= p <= self.k:
            return ZERO_GROUP
        return self.entries[p][q % self.period]


# The complexification comparison is known to be an isomorphism on these
# coefficient rows of the real page; nothing else is assumed about it.
_C_ISO_ROWS: frozenset[tuple[Involution, int]] = frozenset({(Involution.TRIVIAL, 0)})


def _c_iso_on_row(involution: Involution, q: int) -> bool:
    return (involution, q % 8) in _C_ISO_ROWS


@lru_cache(maxsize=1024)
def _row_homology(
    mats: tuple[IntMatrix, ...], row: CoefficientRow
) -> tuple[FinAbGroup, ...]:
    return homology_all(koszul_complex(mats, row))


def _build_page(
    involution: Involution, part: Part, mats: tuple[IntMatrix, ...]
) -> E2Page:
    k = len(mats)
    period, schedule = involution_row_schedule(involution, part is Part.COMPLEX)
    columns = []
    for p in range(k + 1):
        col = []
        for q in range(period):
            tag = schedule.get(q)
            col.append(_row_homology(mats, tag)[p] if tag is not None else ZERO_GROUP)
        columns.append(tuple(col))
    return E2Page(part=part, k=k, entries=tuple(columns))


def build_e2(spec: GraphSpec) -> tuple[E2Page, E2Page]:
    """E^2 pages (real, complex) for a validated spec."""
    report = validate(spec)
    if not report.ok:
        raise InvalidGraphError(report)
    mats = adjacency_matrices(spec)
    return (
        _build_page(spec.involution, Part.REAL, mats),
        _build_page(spec.involution, Part.COMPLEX, mats),
    )


class CertificateKind(Enum):
    ZERO_SOURCE_OR_TARGET = "ZeroSourceOrTarget"
    COPRIME_TORSION = "CoprimeTorsion"
    REAL_SHADOW_C = "RealShadowC"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ConvergenceCertificate:
    """Why the differential d_page at (p, q) of the given part is zero.

    ``Unknown`` means no rule applies and the page cannot be turned.
    """

    kind: CertificateKind
    page: int  # the r of d_r
    p: int
    q: int
    part: Part


@dataclass(frozen=True)
class ConvergenceResult:
    """Outcome of certifying pages r = 2..k.

    Every certificate asserts its differential is zero, so whenever
    ``converged`` holds the E^infinity pages literally equal the E^2 pages
    carried here.  ``shadow`` is the trivial-involution real page of the same
    underlying graph, against which complex-part certificates were checked.
    """

    converged: bool
    real: E2Page
    cplx: E2Page
    shadow: E2Page
    certificates: tuple[ConvergenceCertificate, ...]
    unknown: tuple[ConvergenceCertificate, ...]


def _coprime_torsion(src: FinAbGroup, tgt: FinAbGroup) -> bool:
    if not (src.is_finite and tgt.is_finite):
        return False
    return gcd(src.exponent(), tgt.exponent()) == 1


def _certify(
    page: E2Page, shadow: E2Page, shadow_ok_through: int, r: int, p: int, q: int
) -> CertificateKind:
    src = page.entry(p, q)
    tgt = page.entry(p - r, q + r - 1)
    if src.is_trivial or tgt.is_trivial:
        return CertificateKind.ZERO_SOURCE_OR_TARGET
    if _coprime_torsion(src, tgt):
        return CertificateKind.COPRIME_TORSION
    if page.part is Part.COMPLEX and r - 1 <= shadow_ok_through:
        # Bott-shift the differential to the q = 0 representative.  There the
        # complexification is an isomorphism from the shadow's bottom row, so
        # a certified-zero shadow differential forces the complex one to zero.
        # Valid only while the shadow's own earlier pages are all certified
        # (shadow_ok_through), so that its page-r entries equal its E^2 ones.
        shadow_src = shadow.entry(p, 0)
        shadow_tgt = shadow.entry(p - r, (r - 1) % 8)
        if _c_iso_on_row(Involution.TRIVIAL, 0) and (
            shadow_src.is_trivial or shadow_tgt.is_trivial
        ):
            return CertificateKind.REAL_SHADOW_C
    return CertificateKind.UNKNOWN


def _shadow_certified_through(shadow: E2Page) -> int:
    """Largest page P with every shadow differential on pages 2..P plainly zero.

    Only the zero-source-or-target rule is used here: these are the trivial
    real page's own differentials, checked entrywise.
    """
    k = shadow.k
    for r in range(2, k + 1):
        for p in range(r, k + 1):
            for q in range(8):
                src = shadow.entry(p, q)
                tgt = shadow.entry(p - r, q + r - 1)
                if not (src.is_trivial or tgt.is_trivial):
                    return r - 1
    return k


def _shadow_page(spec: GraphSpec, real: E2Page) -> E2Page:
    if spec.involution is Involution.TRIVIAL:
        return real
    return _build_page(Involution.TRIVIAL, Part.REAL, adjacency_matrices(spec))


def converge(pages: tuple[E2Page, E2Page], spec: GraphSpec) -> ConvergenceResult:
    """Certify all candidate differentials d_r: (p, q) -> (p-r, q+r-1).

    Pages are scanned for r = 2..k.  If some differential has no certificate
    the scan stops after that page and the result cites every uncertified
    location found on it.
    """
    real, cplx = pages
    k = real.k
    shadow = _shadow_page(spec, real)
    shadow_ok_through = _shadow_certified_through(shadow)
    certificates: list[ConvergenceCertificate] = []
    unknown: list[ConvergenceCertificate] = []
    for r in range(2, k + 1):
        for page in (real, cplx):
            for p in range(r, k + 1):
                for q in range(page.period):
                    kind = _certify(page, shadow, shadow_ok_through, r, p, q)
                    cert = ConvergenceCertificate(kind, r, p, q, page.part)
                    certificates.append(cert)
                    if kind is CertificateKind.UNKNOWN:
                        unknown.append(cert)
        if unknown:
            break
    return ConvergenceResult(
        converged=not unknown,
        real=real,
        cplx=cplx,
        shadow=shadow,
        certificates=tuple(certificates),
        unknown=tuple(unknown),
    )


class UnknownConvergenceError(RuntimeError):
    """Assembly was requested although some differential is uncertified."""


@dataclass(frozen=True)
class ExtensionRecord:
    """One filtration step on the diagonal total degree = ``degree``."""

    part: Part
    degree: int
    sub_position: tuple[int, int]
    quotient_position: tuple[int, int]
    outcome: ExtensionOutcome


@dataclass(frozen=True)
class KTheoryTable:
    """KO_0..KO_7 and KU_0..KU_7 with the certificates that produced them.

    An entry is None when its extension problem stayed unresolved.  KU has
    period 2 and KO period 8 by construction.
    """

    ko: tuple[Optional[FinAbGroup], ...]
    ku: tuple[Optional[FinAbGroup], ...]
    resolution_notes: tuple[object, ...] = ()

    def __post_init__(self) -> None:
        if len(self.ko) != 8 or len(self.ku) != 8:
            raise ValueError("tables carry eight KO and eight KU groups")

    @property
    def fully_resolved(self) -> bool:
        return all(g is not None for g in self.ko + self.ku)

    def groups_equal(self, other: "KTheoryTable") -> bool:
        return self.ko == other.ko and self.ku == other.ku


def _diagonal(page: E2Page, n: int) -> list[tuple[tuple[int, int], FinAbGroup]]:
    """Nonzero entries (position, group) on p + q = n, p descending."""
    out = []
    for p in range(page.k, -1, -1):
        grp = page.entry(p, n - p)
        if not grp.is_trivial:
            out.append(((p, n - p), grp))
    return out


def _compose(
    entries: list[tuple[tuple[int, int], FinAbGroup]],
    part: Part,
    degree: int,
    cmap_for_step: bool = False,
) -> tuple[Optional[FinAbGroup], list[ExtensionRecord]]:
    """Fold a diagonal from the quotient end (largest p) downwards."""
    if not entries:
        return ZERO_GROUP, []
    records: list[ExtensionRecord] = []
    quot_pos, acc = entries[0]
    for sub_pos, grp in entries[1:]:
        outcome = resolve_extension(
            grp, acc, cmap_splitting=cmap_for_step and len(entries) == 2
        )
        records.append(
            ExtensionRecord(
                part=part,
                degree=degree,
                sub_position=sub_pos,
                quotient_position=quot_pos,
                outcome=outcome,
            )
        )
        if not outcome.resolved:
            return None, records
        acc = outcome.group
        quot_pos = sub_pos  # the accumulated group now sits at this filtration step
    return acc, records


def _cmap_splitting_available(
    entries: list[tuple[tuple[int, int], FinAbGroup]], shadow: E2Page, n: int
) -> bool:
    """Whether the complexification splitting applies to this complex diagonal.

    Requires the two-term shape used in the splitting argument: exactly two
    nonzero complex entries, the quotient one on a row where the comparison
    with the real page is an isomorphism, and the shadow real diagonal zero
    everywhere except (possibly) under that quotient entry.
    """
    if len(entries) != 2:
        return False
    (quot_p, quot_q), _ = entries[0]
    if not _c_iso_on_row(Involution.TRIVIAL, quot_q):
        return False
    for p in range(shadow.k + 1):
        if p != quot_p and not shadow.entry(p, n - p).is_trivial:
            return False
    return True


def assemble(conv: ConvergenceResult, spec: GraphSpec) -> KTheoryTable:
    """Read KO and KU off the converged pages, resolving each diagonal.

    The real part of degree n is the diagonal p + q = n of the real page.
    The complex part has period 2, but which certificates are available
    depends on the representative diagonal chosen (the real shadow has
    period 8), so all four Bott shifts of a diagonal are tried and the
    first fully resolved one wins; the results cannot disagree.
    """
    if not conv.converged:
        raise UnknownConvergenceError(
            f"uncertified differential at {conv.unknown[0]}"
        )
    if spec.rank != conv.real.k:
        raise ValueError("convergence data does not belong to this spec")
    notes: list[object] = list(conv.certificates)

    ko: list[Optional[FinAbGroup]] = []
    for n in range(8):
        group, records = _compose(_diagonal(conv.real, n), Part.REAL, n)
        notes.extend(records)
        ko.append(group)

    ku_by_parity: dict[int, Optional[FinAbGroup]] = {}
    for parity in (0, 1):
        fallback_records: Optional[list[ExtensionRecord]] = None
        resolved_group: Optional[FinAbGroup] = None
        for shift in (0, 2, 4, 6):
            n = parity + shift
            entries = _diagonal(conv.cplx, n)
            cmap_ok = _cmap_splitting_available(entries, conv.shadow, n)
            group, records = _compose(entries, Part.COMPLEX, n, cmap_for_step=cmap_ok)
            if fallback_records is None:
                fallback_records = records
            if group is not None:
                resolved_group = group
                notes.extend(records)
                break
        if resolved_group is None and fallback_records is not None:
            notes.extend(fallback_records)
        ku_by_parity[parity] = resolved_group
    ku = tuple(ku_by_parity[n % 2] for n in range(8))

    return KTheoryTable(ko=tuple(ko), ku=ku, resolution_notes=tuple(notes))


@dataclass(frozen=True)
class PipelineResult:
    """Everything the pipeline produced for one spec."""

    spec: GraphSpec
    real: E2Page
    cplx: E2Page
    convergence: ConvergenceResult
    table: Optional[KTheoryTable]

    @property
    def status(self) -> str:
        return "ok" if self.convergence.converged else "unknown-differential"


def compute_ktheory(spec: GraphSpec) -> PipelineResult:
    """Full pipeline: E^2 pages, convergence certificates, assembled table."""
    pages = build_e2(spec)
    conv = converge(pages, spec)
    table = assemble(conv, spec) if conv.converged else None
    return PipelineResult(
        spec=spec, real=pages[0], cplx=pages[1], convergence=conv, table=table
    )
