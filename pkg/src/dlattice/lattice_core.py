"""Positive-definite integral lattices and their d-invariants.

Covectors (elements of the dual lattice) are stored in dual-basis
coordinates ``c_i = <chi, b_i>``, so they are integer vectors and the norm
is ``c^T G^{-1} c``.  Characteristic classes are labelled by Smith
coordinates of ``(chi - chi_0) / 2`` where ``chi_0`` is the canonical
characteristic covector with ``c_i = |b_i|``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd
from typing import Iterable, Mapping, Sequence

from . import exact
from .exact import BudgetExceeded

Label = tuple[int, ...]
Covector = tuple[int, ...]


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class IntegralLattice:
    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]
    gram: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def gram_inverse(self) -> list[list[Fraction]]:
        return exact.inverse(self.gram) if self.rank else []

    @cached_property
    def determinant(self) -> int:
        return exact.det(self.gram)

    @cached_property
    def cholesky(self):
        return exact.ldl(self.gram)

    @cached_property
    def smith(self):
        return exact.smith_normal_form(self.gram) if self.rank else ([], [], [])

    def norm_of_covector(self, c: Sequence[int]) -> Fraction:
        return exact.quad(self.gram_inverse, c) if self.rank else Fraction(0)

    def vector(self, coeffs: Sequence) -> tuple[Fraction, ...]:
        """Ambient vector sum_i coeffs[i] * b_i."""
        out = [Fraction(0)] * self.ambient_dim
        for a, b in zip(coeffs, self.basis):
            if a:
                for j, x in enumerate(b):
                    out[j] += a * x
        return tuple(out)

    def covector_vector(self, c: Sequence[int]) -> tuple[Fraction, ...]:
        """Ambient vector of the dual element with dual-basis coordinates c."""
        return self.vector(exact.matvec(self.gram_inverse, c))


def lattice_from_basis(ambient_dim: int, basis: Iterable[Sequence]) -> IntegralLattice:
    rows = tuple(tuple(Fraction(x) for x in b) for b in basis)
    for b in rows:
        if len(b) != ambient_dim:
            raise LatticeError("basis vector length differs from ambient dimension")
    if exact.rank(rows) != len(rows):
        raise LatticeError("basis vectors are linearly dependent")
    gram = []
    for u in rows:
        row = []
        for v in rows:
            x = exact.dot(u, v)
            if x.denominator != 1:
                raise LatticeError(f"non-integral pairing {x}")
            row.append(int(x))
        gram.append(tuple(row))
    lat = IntegralLattice(ambient_dim, rows, tuple(gram))
    if lat.rank:
        lat.cholesky  # raises if not positive definite
    return lat


def standard_lattice(n: int) -> IntegralLattice:
    return lattice_from_basis(n, exact.identity(n))


def dual_basis(lat: IntegralLattice) -> list[tuple[Fraction, ...]]:
    return [lat.vector(row) for row in lat.gram_inverse]


# --- discriminant group -----------------------------------------------------

@dataclass(frozen=True)
class DiscriminantGroup:
    invariant_factors: tuple[int, ...]
    to_smith: tuple[tuple[int, ...], ...]     # k x n, rows of U for factors > 1
    from_smith: tuple[tuple[int, ...], ...]   # n x k, matching columns of U^{-1}

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def label(self, c: Sequence[int]) -> Label:
        return tuple(exact.dot(row, c) % d for row, d in zip(self.to_smith, self.invariant_factors))

    def lift(self, s: Sequence[int]) -> Covector:
        return tuple(exact.dot(row, s) for row in self.from_smith)

    def add(self, s: Sequence[int], t: Sequence[int], k: int = 1) -> Label:
        return tuple((a + k * b) % d for a, b, d in zip(s, t, self.invariant_factors))

    def elements(self) -> list[Label]:
        return [tuple(x) for x in product(*(range(d) for d in self.invariant_factors))]

    def element_order(self, s: Sequence[int]) -> int:
        out = 1
        for a, d in zip(s, self.invariant_factors):
            out = exact.lcm(out, d // gcd(a, d))
        return out


def discriminant_group(lat: IntegralLattice) -> DiscriminantGroup:
    if lat.rank == 0:
        return DiscriminantGroup((), (), ())
    u, diag, _ = lat.smith
    u_inv = [[int(x) for x in row] for row in exact.inverse(u)]
    keep = [i for i, d in enumerate(diag) if d > 1]
    return DiscriminantGroup(
        tuple(diag[i] for i in keep),
        tuple(tuple(u[i]) for i in keep),
        tuple(tuple(row[i] for i in keep) for row in u_inv),
    )


def discriminant_form(lat: IntegralLattice, x: Sequence[int], y: Sequence[int]) -> Fraction:
    """b(x, y) in Q/Z (returned in [0, 1)), for group elements in Smith coordinates."""
    grp = discriminant_group(lat)
    if not grp.invariant_factors:
        return Fraction(0)
    val = exact.quad(lat.gram_inverse, grp.lift(x), grp.lift(y))
    return val - (val.numerator // val.denominator)


# --- characteristic covectors and the d-invariant ------------------------------

def canonical_char(lat: IntegralLattice) -> Covector:
    return tuple(lat.gram[i][i] for i in range(lat.rank))


def is_characteristic(lat: IntegralLattice, c: Sequence[int]) -> bool:
    return all((c[i] - lat.gram[i][i]) % 2 == 0 for i in range(lat.rank))


def class_of(lat: IntegralLattice, c: Sequence[int]) -> Label:
    if not is_characteristic(lat, c):
        raise LatticeError("covector is not characteristic")
    chi0 = canonical_char(lat)
    return discriminant_group(lat).label([(a - b) // 2 for a, b in zip(c, chi0)])


def class_representative(lat: IntegralLattice, label: Sequence[int]) -> Covector:
    chi0 = canonical_char(lat)
    lift = discriminant_group(lat).lift(label)
    return tuple(a + 2 * b for a, b in zip(chi0, lift))


def char_classes(lat: IntegralLattice, budget: int = 10_000) -> list[tuple[Label, Covector]]:
    grp = discriminant_group(lat)
    if grp.order > budget:
        raise BudgetExceeded(f"discriminant {grp.order} exceeds class budget {budget}")
    return [(s, class_representative(lat, s)) for s in grp.elements()]


def _mod2(x: Fraction) -> Fraction:
    return x - 2 * ((x.numerator // x.denominator) // 2)


def rho(lat: IntegralLattice, label: Sequence[int]) -> Fraction:
    """rho of a class, as a rational in [0, 2)."""
    c = class_representative(lat, label)
    return _mod2((lat.norm_of_covector(c) - lat.rank) / 4)


def minimize_in_class(lat: IntegralLattice, c: Sequence[int],
                      budget: int = 2_000_000) -> tuple[Fraction, list[Covector]]:
    """Minimum norm over chi + 2*Lambda and every covector attaining it."""
    if not is_characteristic(lat, c):
        raise LatticeError("covector is not characteristic")
    if lat.rank == 0:
        return Fraction(0), [()]
    r, d = lat.cholesky
    v = exact.matvec(lat.gram_inverse, c)
    target = [-x / 2 for x in v]
    # |chi + 2 sum k_j b_j| = 4 q(k - target)
    best, points = exact.closest_points(r, d, target, lat.norm_of_covector(c) / 4, budget)
    reps = sorted(tuple(a + 2 * b for a, b in zip(c, exact.matvec(lat.gram, k))) for k in points)
    return 4 * best, reps


def short_covectors(lat: IntegralLattice, budget: int = 2_000_000) -> set[Covector]:
    out: set[Covector] = set()
    for _, rep in char_classes(lat):
        out.update(minimize_in_class(lat, rep, budget)[1])
    return out


@dataclass(frozen=True)
class DInvariant:
    factors: tuple[int, ...]
    values: Mapping[Label, Fraction]
    rank: int = 0

    @property
    def base(self) -> Label:
        return (0,) * len(self.factors)

    def add(self, s: Sequence[int], t: Sequence[int], k: int = 1) -> Label:
        return tuple((a + k * b) % d for a, b, d in zip(s, t, self.factors))

    def element_order(self, s: Sequence[int]) -> int:
        out = 1
        for a, d in zip(s, self.factors):
            out = exact.lcm(out, d // gcd(a, d))
        return out

    def multiset(self) -> list[Fraction]:
        return sorted(self.values.values())

    def negated(self) -> "DInvariant":
        return DInvariant(self.factors, {k: -v for k, v in self.values.items()}, self.rank)

    def __eq__(self, other):
        if not isinstance(other, DInvariant):
            return NotImplemented
        return (self.factors, self.rank, dict(self.values)) == (other.factors, other.rank, dict(other.values))


def rho_invariant(lat: IntegralLattice, class_budget: int = 10_000) -> DInvariant:
    """rho of every class, as rationals in [0, 2)."""
    values = {label: rho(lat, label) for label, _ in char_classes(lat, class_budget)}
    return DInvariant(discriminant_group(lat).invariant_factors, values, lat.rank)


def d_invariant(lat: IntegralLattice, budget: int = 2_000_000,
                class_budget: int = 10_000) -> DInvariant:
    values = {}
    for label, rep in char_classes(lat, class_budget):
        m, _ = minimize_in_class(lat, rep, budget)
        val = (m - lat.rank) / 4
        if _mod2(val) != rho(lat, label):
            raise AssertionError("d-invariant disagrees with rho mod 2")
        values[label] = val
    return DInvariant(discriminant_group(lat).invariant_factors, values, lat.rank)


def polarized_form(dinv: DInvariant, x: Sequence[int], y: Sequence[int],
                   at: Sequence[int] | None = None) -> Fraction:
    """b(x, y) recovered from d-values alone, in [0, 1)."""
    c = dinv.base if at is None else tuple(at)
    vals = dinv.values
    s = (vals[dinv.add(dinv.add(c, x), y)] + vals[c] - vals[dinv.add(c, x)] - vals[dinv.add(c, y)]) / 2
    return s - (s.numerator // s.denominator)


# --- torsor isomorphisms ----------------------------------------------------------

@dataclass(frozen=True)
class TorsorIso:
    """Class map s -> offset + matrix * s (Smith coordinates, reduced mod the factors)."""
    factors: tuple[int, ...]
    offset: Label
    matrix: tuple[tuple[int, ...], ...]   # columns = images of generators: matrix[i] = h_i
    sign: int

    def group_map(self, s: Sequence[int]) -> Label:
        out = [0] * len(self.factors)
        for a, h in zip(s, self.matrix):
            for j, x in enumerate(h):
                out[j] += a * x
        return tuple(x % d for x, d in zip(out, self.factors))

    def __call__(self, s: Sequence[int]) -> Label:
        g = self.group_map(s)
        return tuple((a + b) % d for a, b, d in zip(self.offset, g, self.factors))

    def class_map(self) -> dict[Label, Label]:
        return {s: self(s) for s in product(*(range(d) for d in self.factors))}


def find_torsor_iso(d1: DInvariant, d2: DInvariant, sign: int = 1,
                    mod2: bool = False) -> TorsorIso | None:
    """First class map phi with d2(phi(s)) = sign * d1(s), or None.

    With ``mod2`` the values are compared in Q/2Z, which is what an
    (anti-)isomorphism of rho-invariants needs.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if d1.factors != d2.factors:
        return None
    norm = _mod2 if mod2 else (lambda x: x)
    v1 = {s: norm(sign * x) for s, x in d1.values.items()}
    v2 = {s: norm(x) for s, x in d2.values.items()}
    if sorted(v1.values()) != sorted(v2.values()):
        return None
    factors = d1.factors
    k = len(factors)
    elements = list(product(*(range(d) for d in factors)))
    order = {s: d1.element_order(s) for s in elements}
    want = sorted((order[s], v1[s]) for s in elements)
    bases = [a for a in elements
             if v2[a] == v1[d1.base]
             and sorted((order[x], v2[d2.add(a, x)]) for x in elements) == want]
    # candidate generator images: order divides the factor
    cand = [[h for h in elements if factors[i] % order[h] == 0]
            for i in range(k)]
    # classes determined once generators 0..i are fixed, grouped by their last nonzero coordinate
    by_level: list[list[Label]] = [[] for _ in range(k)]
    for s in elements:
        nz = [i for i, a in enumerate(s) if a]
        if nz:
            by_level[nz[-1]].append(s)

    for a in bases:
        images: dict[Label, Label] = {d1.base: a}
        hs: list[Label] = []

        def extend(i: int) -> bool:
            if i == k:
                return True
            for h in cand[i]:
                new = {}
                used = set(images.values())
                ok = True
                for s in by_level[i]:
                    img = list(a)
                    for j, coeff in enumerate(s[:i + 1]):
                        g = h if j == i else hs[j]
                        for t in range(k):
                            img[t] += coeff * g[t]
                    img = tuple(x % d for x, d in zip(img, factors))
                    if v2[img] != v1[s] or img in used:
                        ok = False
                        break
                    used.add(img)
                    new[s] = img
                if not ok:
                    continue
                hs.append(h)
                images.update(new)
                if extend(i + 1):
                    return True
                hs.pop()
                for s in new:
                    del images[s]
            return False

        if extend(0):
            return TorsorIso(factors, a, tuple(hs), sign)
    return None


def check_torsor_iso(iso: TorsorIso, d1: DInvariant, d2: DInvariant) -> bool:
    """Bijectivity, equivariance and d2 o phi = sign * d1."""
    cmap = iso.class_map()
    if len(set(cmap.values())) != len(cmap):
        return False
    base_img = iso(d1.base)
    for s, t in cmap.items():
        if d2.values[t] != iso.sign * d1.values[s]:
            return False
        # phi(s) - phi(0) = group_map(s - 0)
        if d2.add(t, base_img, -1) != iso.group_map(s):
            return False
    return True


def check_iso_respects_b(iso: TorsorIso, lat1: IntegralLattice, lat2: IntegralLattice) -> bool:
    """b2(phi x, phi y) = sign * b1(x, y) on all pairs of generators."""
    k = len(iso.factors)
    gens = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    for x in gens:
        for y in gens:
            lhs = discriminant_form(lat2, iso.group_map(x), iso.group_map(y))
            rhs = iso.sign * discriminant_form(lat1, x, y)
            if (lhs - rhs).denominator != 1:
                return False
    return True


# --- gluing and unimodular lattices ---------------------------------------------

def direct_sum_ambient(lat1: IntegralLattice, lat2: IntegralLattice) -> IntegralLattice:
    z1 = (Fraction(0),) * lat1.ambient_dim
    z2 = (Fraction(0),) * lat2.ambient_dim
    basis = [b + z2 for b in lat1.basis] + [z1 + b for b in lat2.basis]
    return lattice_from_basis(lat1.ambient_dim + lat2.ambient_dim, basis)


def glue(lat1: IntegralLattice, lat2: IntegralLattice, iso: TorsorIso) -> IntegralLattice:
    """The overlattice {x + y : phi(x) = y} in the concatenated ambient space."""
    g1, g2 = discriminant_group(lat1), discriminant_group(lat2)
    if g1.invariant_factors != iso.factors or g2.invariant_factors != iso.factors:
        raise LatticeError("iso does not match the discriminant groups")
    z1 = (Fraction(0),) * lat1.ambient_dim
    z2 = (Fraction(0),) * lat2.ambient_dim
    gens = [b + z2 for b in lat1.basis] + [z1 + b for b in lat2.basis]
    for i in range(len(iso.factors)):
        e = tuple(int(i == j) for j in range(len(iso.factors)))
        x = lat1.covector_vector(g1.lift(e))
        y = lat2.covector_vector(g2.lift(iso.group_map(e)))
        gens.append(x + y)
    den = exact.common_denominator(v for row in gens for v in row)
    rows = exact.hermite_rows([[int(v * den) for v in row] for row in gens])
    out = lattice_from_basis(lat1.ambient_dim + lat2.ambient_dim,
                             [[Fraction(v, den) for v in row] for row in rows])
    if abs(out.determinant) != 1:
        raise LatticeError("glued lattice is not unimodular")
    return out


def orthonormal_basis(lat: IntegralLattice, budget: int = 2_000_000) -> list[tuple[Fraction, ...]] | None:
    """Ambient vectors of an orthonormal basis (one per +- pair), or None."""
    if lat.rank == 0:
        return []
    r, d = lat.cholesky
    units = []
    for k, q in exact.points_within(r, d, Fraction(1), budget):
        if q != 1:
            continue
        lead = next(x for x in k if x)
        if lead > 0:
            units.append(k)
    if len(units) != lat.rank:
        return None
    for i, u in enumerate(units):
        for v in units[:i]:
            if exact.quad(lat.gram, u, v):
                return None
    if abs(exact.det(units)) != 1:
        return None
    return sorted((lat.vector(k) for k in units), reverse=True)


def restrict_covector(lat: IntegralLattice, chi: Sequence) -> Covector:
    vals = [exact.dot(chi, b) for b in lat.basis]
    if any(Fraction(v).denominator != 1 for v in vals):
        raise LatticeError("covector is not integral on the lattice")
    return tuple(int(v) for v in vals)


def short_restriction_surjects(ambient: IntegralLattice, sub: IntegralLattice,
                               max_rank: int = 20) -> bool:
    """Whether every short covector of ``sub`` is the restriction of a short covector of ``ambient``."""
    if ambient.rank > max_rank:
        raise BudgetExceeded(f"ambient rank {ambient.rank} exceeds {max_rank}")
    images = {restrict_covector(sub, ambient.covector_vector(c)) for c in short_covectors(ambient)}
    return short_covectors(sub) <= images


def theta_counts(lat: IntegralLattice, bound: int, budget: int = 2_000_000) -> tuple[int, ...]:
    """Number of lattice vectors of each norm 0..bound."""
    counts = [0] * (bound + 1)
    if lat.rank == 0:
        counts[0] = 1
        return tuple(counts)
    r, d = lat.cholesky
    for _, q in exact.points_within(r, d, Fraction(bound), budget):
        counts[int(q)] += 1
    return tuple(counts)


# --- text formats ------------------------------------------------------------------

def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def serialize_lattice(lat: IntegralLattice) -> str:
    lines = ["lattice", str(lat.ambient_dim)]
    lines += [" ".join(_frac(x) for x in b) for b in lat.basis]
    return "\n".join(lines) + "\n"


def parse_lattice(text: str) -> IntegralLattice:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "lattice" or len(lines) < 2:
        raise LatticeError("expected 'lattice' header and ambient dimension")
    try:
        dim = int(lines[1])
        basis = [[Fraction(tok) for tok in ln.split()] for ln in lines[2:]]
    except (ValueError, ZeroDivisionError) as exc:
        raise LatticeError(str(exc)) from None
    return lattice_from_basis(dim, basis)


def serialize_dinvariant(dinv: DInvariant) -> str:
    lines = ["# d-invariant; class labels are Smith offsets from the canonical characteristic covector",
             f"rank {dinv.rank}",
             "factors" + "".join(f" {d}" for d in dinv.factors)]
    for label in sorted(dinv.values):
        lines.append(f"class [{','.join(map(str, label))}] d {_frac(dinv.values[label])}")
    return "\n".join(lines) + "\n"
