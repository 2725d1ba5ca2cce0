"""
Reduction modulo Delta_k(Omega) for Omega = Q(n,k) * H0.

A rational function f stands for f * H0. With S_k(H0)/H0 = a/b, subtracting
Delta_k(g * H0) = (g(k+1) a(k)/b(k) - g(k)) * H0 moves poles along their shift class
and lowers polynomial degrees:

* a pole of order e at a root rho of an affine form u moves one step up (to rho - 1)
  with g = c(k) b(k-1) / (k - rho)^e, or one step down (to rho + 1) with
  g = c(k) b(k-1) / (k - rho - 1)^e; c is fixed by a truncated power series division;
* a polynomial q gives the relation a(k) q(k+1) - b(k-1) q(k) = 0 in M, which
  reduces every polynomial to the span of a few monomials k^d (the basis of N).
"""
from collections import Counter
from collections import defaultdict
from dataclasses import dataclass
from dataclasses import field

from submodule_telescoping.exact_algebra.linalg import rank
from submodule_telescoping.exact_algebra.polynomials import Affine
from submodule_telescoping.exact_algebra.polynomials import PolyK
from submodule_telescoping.exact_algebra.polynomials import RFuncN
from submodule_telescoping.exact_algebra.polynomials import RFuncNK
from submodule_telescoping.exact_algebra.polynomials import factor_k
from submodule_telescoping.exact_algebra.polynomials import format_rfuncnk
from submodule_telescoping.exact_algebra.polynomials import shift
from submodule_telescoping.hyperterm.term import Binomial
from submodule_telescoping.hyperterm.term import HTerm
from submodule_telescoping.utils.errors import AnsatzCapExceeded
from submodule_telescoping.utils.errors import UnsupportedKernel
from submodule_telescoping.utils.logging import log

ClassKey = tuple[int, int, int]
PoleKey = tuple[ClassKey, int]


def class_root(key: ClassKey, position: int) -> RFuncN:
    """The root in k of alpha*n + beta*(k + position) + base."""
    alpha, beta, base = key
    n = RFuncN.variable()
    return -(n * alpha + base + beta * position) / beta


def default_degree_cap(h: HTerm) -> int:
    """4 * (total absolute binomial exponent) + 8."""
    weight = sum(abs(f.exponent) for f in h.spec.factors if isinstance(f, Binomial))
    return 4 * weight + 8


def _series_mul(a: list, b: list, order: int) -> list:
    out = [RFuncN(0)] * order
    for i, x in enumerate(a[:order]):
        if not x:
            continue
        for j, y in enumerate(b[: order - i]):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _series_inv(w: list, order: int) -> list:
    inv0 = w[0].inverse()
    out = [inv0]
    for m in range(1, order):
        acc = RFuncN(0)
        for i in range(1, m + 1):
            if i < len(w) and w[i]:
                acc = acc + w[i] * out[m - i]
        out.append(-acc * inv0)
    return out


def _head(p: PolyK, count: int) -> list:
    return [p[i] for i in range(count)]


def _tail(p: PolyK, start: int) -> PolyK:
    return PolyK(p.coeffs[start:])


def _trim(parts: list) -> tuple:
    parts = list(parts)
    while parts and not parts[-1]:
        parts.pop()
    return tuple(parts)


@dataclass
class ShiftClass:
    """
    Positions of the zeros of a(k) and b(k-1) inside one shift class of affine forms.

    Attributes:
        key (ClassKey): (alpha, beta, base) with beta > 0 and 0 <= base < beta.
        a_positions (Counter): position -> multiplicity as a factor of a(k).
        b_positions (Counter): position -> multiplicity as a factor of b(k-1).
    """

    key: ClassKey
    a_positions: Counter = field(default_factory=Counter)
    b_positions: Counter = field(default_factory=Counter)

    @property
    def kind(self) -> str:
        if self.a_positions and self.b_positions:
            return "mixed"
        if self.a_positions:
            return "a"
        return "b" if self.b_positions else "neutral"

    @property
    def target(self) -> int:
        """The position every pole of the class is collected on."""
        if self.a_positions:
            return max(self.a_positions)
        if self.b_positions:
            return min(self.b_positions)
        return 0


@dataclass(frozen=True)
class SubmoduleBasis:
    """
    The basis m_d = k^d * H0 (d in degrees) of N and the reduction of higher monomials.

    Attributes:
        degrees (tuple[int, ...]): Monomial degrees of the basis, ascending.
        relations (dict): d -> coordinates of m_d for the non-basis degrees computed so far.
    """

    degrees: tuple
    relations: dict

    @property
    def dim(self) -> int:
        return len(self.degrees)


@dataclass(frozen=True)
class StdForm:
    """
    Standard form of f * H0 modulo Delta_k(Omega).

    Attributes:
        poles (dict): (class key, position) -> principal part (c_1, ..., c_e), standing for
            sum of c_j / (k - rho)^j.
        frac (RFuncNK): The fractional part as a rational function.
        poly (PolyK): The reduced polynomial part, supported on the basis degrees.
        coords (tuple[RFuncN, ...]): Coordinates of the polynomial part in the basis.
        cert (RFuncNK | None): g with f - frac - poly = g(k+1) * R2 - g.
    """

    poles: dict
    frac: RFuncNK
    poly: PolyK
    coords: tuple
    cert: RFuncNK | None = None

    def frac_vector(self) -> dict:
        return {
            (key, pos, j): c
            for (key, pos), parts in self.poles.items()
            for j, c in enumerate(parts, start=1)
            if c
        }

    def in_submodule(self) -> bool:
        return not self.poles

    def to_json(self) -> dict:
        return {
            "frac": format_rfuncnk(self.frac),
            "poly_coords": [str(c) for c in self.coords],
            "cert": None if self.cert is None else format_rfuncnk(self.cert),
        }


@dataclass(frozen=True)
class SnMatrix:
    """
    Matrix of S_n on N: column d holds the coordinates of S_n(m_d).

    Attributes:
        entries (list[list[RFuncN]]): Row-major D x D matrix.
        invertible (bool): Whether the matrix has full rank.
    """

    entries: list
    invertible: bool

    @property
    def dim(self) -> int:
        return len(self.entries)

    def twisted_apply(self, v: list) -> list:
        """A * sigma_n(v): coordinates of S_n(sum v_d m_d)."""
        shifted = [x.shift(1) for x in v]
        out = []
        for row in self.entries:
            acc = RFuncN(0)
            for a, x in zip(row, shifted):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return out


class ReductionContext:
    """
    Reduction data of a shift-reduced kernel H0.

    Attributes:
        h0 (HTerm): The kernel with its certificates.
        degree_cap (int): Largest monomial degree used to generate polynomial relations.
        classes (dict): ClassKey -> ShiftClass for the zeros of a(k) and b(k-1).
    """

    def __init__(self, h0: HTerm, degree_cap: int | None = None, verbose: int = 0):
        self.h0 = h0
        self.degree_cap = degree_cap or default_degree_cap(h0)
        self.verbose = verbose
        self.a = PolyK.from_nk_poly(h0.r2.num)
        self.b = PolyK.from_nk_poly(h0.r2.den)
        self.b_prev = self.b.taylor_shift(-1)
        self.b_prev_nk = shift(RFuncNK(h0.r2.den), 0, -1)
        self.classes: dict[ClassKey, ShiftClass] = {}
        for poly, attr, offset in ((h0.r2.num, "a_positions", 0), (h0.r2.den, "b_positions", -1)):
            for factor, mult in factor_k(poly):
                if factor.degree(1) <= 0:
                    continue
                key, pos = Affine.from_poly(factor).shift_class()
                entry = self.classes.setdefault(key, ShiftClass(key))
                getattr(entry, attr)[pos + offset] += mult
        for entry in self.classes.values():
            if entry.kind == "mixed":
                raise UnsupportedKernel(f"kernel is not shift-reduced in class {entry.key}")
        self._pivots: dict[int, tuple[PolyK, PolyK]] = {}
        self._next_j = 0
        self._basis: SubmoduleBasis | None = None
        self._sn_matrix: SnMatrix | None = None

    @property
    def r1_inverse_shift(self) -> RFuncNK:
        """H0(n-1, k) / H0(n, k)."""
        return shift(self.h0.r1, -1, 0).inverse()

    @property
    def r2_inverse_shift(self) -> RFuncNK:
        """H0(n, k-1) / H0(n, k)."""
        return shift(self.h0.r2, 0, -1).inverse()

    # polynomial relations

    def _relation_image(self, q: PolyK) -> PolyK:
        return self.a * q.taylor_shift(1) - self.b_prev * q

    def _extend(self) -> int | None:
        """Adds the relation of the next monomial; returns its pivot degree, if any."""
        if self._next_j > self.degree_cap:
            raise AnsatzCapExceeded(self.degree_cap, f"no polynomial relation up to degree cap {self.degree_cap}")
        j = self._next_j
        self._next_j += 1
        q = PolyK.monomial(j)
        p = self._relation_image(q)
        while p and p.degree() in self._pivots:
            pivot_p, pivot_q = self._pivots[p.degree()]
            c = p.lc()
            p = p - pivot_p.scale(c)
            q = q - pivot_q.scale(c)
        if not p:
            return None
        inv = p.lc().inverse()
        self._pivots[p.degree()] = (p.scale(inv), q.scale(inv))
        if self._basis is not None and p.degree() in self._basis.degrees:
            raise UnsupportedKernel(f"late relation in degree {p.degree()} changes the basis")
        return p.degree()

    def _pivot(self, degree: int) -> tuple[PolyK, PolyK]:
        while degree not in self._pivots:
            self._extend()
        return self._pivots[degree]

    def basis(self) -> SubmoduleBasis:
        """
        Finds the basis degrees: the monomial degrees that are not leading degrees of a
        relation a(k) q(k+1) - b(k-1) q(k).

        Raises:
            AnsatzCapExceeded: If no relation exists below the degree cap.
        """
        if self._basis is None:
            width = max(self.a.degree(), self.b.degree(), 0)
            stop = min(self.degree_cap, 2 * width + 4)
            while self._next_j <= stop:
                self._extend()
            if not self._pivots:
                raise AnsatzCapExceeded(self.degree_cap, "no polynomial relation found")
            top = max(self._pivots)
            degrees = tuple(d for d in range(top) if d not in self._pivots)
            self._basis = SubmoduleBasis(degrees, {})
            relations = {
                d: tuple(self._reduce_poly(PolyK.monomial(d))[0][e] for e in degrees)
                for d in sorted(self._pivots)
            }
            self._basis = SubmoduleBasis(degrees, relations)
            log(f"basis of N: D = {len(degrees)}, degrees {list(degrees)}", self.verbose)
        return self._basis

    def _reduce_poly(self, p: PolyK) -> tuple[PolyK, PolyK]:
        """Returns (reduced p, q) with p = reduced + a(k) q(k+1) - b(k-1) q(k)."""
        basis = set(self._basis.degrees)
        q_total = PolyK()
        for d in range(p.degree(), -1, -1):
            c = p[d]
            if not c or d in basis:
                continue
            pivot_p, pivot_q = self._pivot(d)
            p = p - pivot_p.scale(c)
            q_total = q_total + pivot_q.scale(c)
        return p, q_total

    def coords(self, p: PolyK) -> list[RFuncN]:
        """Coordinates of p * H0 + Delta_k(Omega) in the basis."""
        basis = self.basis()
        reduced, _ = self._reduce_poly(p)
        return [reduced[d] for d in basis.degrees]

    # fractional parts

    def _partial_fractions(self, f: RFuncNK) -> tuple[dict, PolyK]:
        num = PolyK.from_nk_poly(f.num)
        den = PolyK.from_nk_poly(f.den)
        quo, rem = num.divmod(den)
        poles = {}
        if not rem:
            return poles, quo
        for factor, mult in factor_k(f.den):
            if factor.degree(1) <= 0:
                continue
            key, pos = Affine.from_poly(factor).shift_class()
            rho = class_root(key, pos)
            w = den.taylor_shift(rho)
            series = _series_mul(
                _head(rem.taylor_shift(rho), mult), _series_inv(_head(w, 2 * mult)[mult:], mult), mult
            )
            parts = _trim(series[mult - j] for j in range(1, mult + 1))
            if parts:
                poles[(key, pos)] = parts
        return poles, quo

    def _pole_term(self, rho: RFuncN, c: PolyK, order: int) -> RFuncNK:
        """c(k) * b(k-1) / (k - rho)^order as a rational function."""
        linear = RFuncNK.k() - rho.to_rfuncnk()
        return c.to_rfuncnk() * self.b_prev_nk / linear**order

    def _move(self, poles: dict, key: ClassKey, pos: int, up: bool, acc: dict) -> None:
        parts = poles.pop((key, pos))
        e = len(parts)
        principal = [parts[e - 1 - m] for m in range(e)]
        rho = class_root(key, pos)
        if up:
            lead = self.b_prev.taylor_shift(rho)
            if not lead[0]:
                raise UnsupportedKernel(f"cannot move a pole up from position {pos} of {key}")
            gamma = PolyK([-x for x in _series_mul(principal, _series_inv(_head(lead, e), e), e)])
            acc["poly"] = acc["poly"] + _tail(gamma * lead, e).taylor_shift(-rho)
            new_pos, new_rho = pos + 1, class_root(key, pos + 1)
            product = gamma * self.a.taylor_shift(new_rho)
            sign = -1
            cert_rho = rho
        else:
            lead = self.a.taylor_shift(rho)
            if not lead[0]:
                raise UnsupportedKernel(f"cannot move a pole down from position {pos} of {key}")
            gamma = PolyK(_series_mul(principal, _series_inv(_head(lead, e), e), e))
            acc["poly"] = acc["poly"] - _tail(gamma * lead, e).taylor_shift(-rho)
            new_pos, new_rho = pos - 1, class_root(key, pos - 1)
            product = gamma * self.b_prev.taylor_shift(new_rho)
            sign = 1
            cert_rho = new_rho
        acc["poly"] = acc["poly"] + _tail(product, e).taylor_shift(-new_rho).scale(sign)
        incoming = [product[e - j] * sign for j in range(1, e + 1)]
        existing = list(poles.get((key, new_pos), ()))
        size = max(len(existing), len(incoming))
        merged = _trim(
            (existing[i] if i < len(existing) else RFuncN(0)) + (incoming[i] if i < len(incoming) else RFuncN(0))
            for i in range(size)
        )
        if merged:
            poles[(key, new_pos)] = merged
        else:
            poles.pop((key, new_pos), None)
        if acc["cert"] is not None:
            acc["cert"] = acc["cert"] + self._pole_term(cert_rho, gamma.taylor_shift(-cert_rho), e)

    def _collect(self, poles: dict, acc: dict) -> None:
        by_class: dict[ClassKey, set] = defaultdict(set)
        for key, pos in poles:
            by_class[key].add(pos)
        for key in sorted(by_class):
            target = self.classes[key].target if key in self.classes else 0
            while True:
                below = [p for (k, p) in poles if k == key and p < target]
                if not below:
                    break
                self._move(poles, key, min(below), True, acc)
            while True:
                above = [p for (k, p) in poles if k == key and p > target]
                if not above:
                    break
                self._move(poles, key, max(above), False, acc)

    def frac_to_rfuncnk(self, poles: dict) -> RFuncNK:
        total = RFuncNK(0)
        k = RFuncNK.k()
        for (key, pos), parts in poles.items():
            linear = k - class_root(key, pos).to_rfuncnk()
            for j, c in enumerate(parts, start=1):
                if c:
                    total = total + c.to_rfuncnk() / linear**j
        return total

    def std_form(self, f: RFuncNK, track_cert: bool = False) -> StdForm:
        """
        Reduces f * H0 to fractional part + basis polynomial modulo Delta_k(Omega).

        Args:
            f (RFuncNK): The coefficient of H0.
            track_cert (bool): Also return g with f - frac - poly = g(k+1) R2 - g.

        Returns:
            StdForm: The standard form.

        Raises:
            UnsupportedDenominator: If f has a k-dependent non-affine denominator factor.
            AnsatzCapExceeded: If polynomial relations run past the degree cap.
        """
        basis = self.basis()
        poles, quo = self._partial_fractions(f)
        acc = {"poly": quo, "cert": RFuncNK(0) if track_cert else None}
        self._collect(poles, acc)
        reduced, q_total = self._reduce_poly(acc["poly"])
        cert = None
        if track_cert:
            cert = acc["cert"] + (q_total * self.b_prev).to_rfuncnk()
        coords = tuple(reduced[d] for d in basis.degrees)
        return StdForm(poles, self.frac_to_rfuncnk(poles), reduced, coords, cert)

    def sn_matrix(self) -> SnMatrix:
        """
        The matrix of S_n on N; column d is std_form(k^d * R1) in coordinates.

        Raises:
            UnsupportedKernel: If S_n(m_d) leaves N (nonzero fractional part).
        """
        if self._sn_matrix is None:
            basis = self.basis()
            columns = []
            for d in basis.degrees:
                form = self.std_form(RFuncNK.k() ** d * self.h0.r1)
                if not form.in_submodule():
                    raise UnsupportedKernel(f"S_n(m_{d}) has a fractional part; N is not S_n-closed")
                columns.append(list(form.coords))
            size = basis.dim
            entries = [[columns[c][r] for c in range(size)] for r in range(size)]
            self._sn_matrix = SnMatrix(entries, rank(entries, size) == size if size else True)
            log(f"S_n matrix: {size} x {size}", self.verbose)
        return self._sn_matrix
