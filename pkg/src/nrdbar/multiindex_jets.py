"""Multi-index arithmetic, monomial ideals in the fiber variables, and
truncated jet rings with normal forms and standard-monomial bases.

A space is C^n_z x C^k_t; the fiber coordinates t1..tk carry the nilpotent
structure.  Ideals handled generically here are monomial in t; coefficients
of jet polynomials may depend on the base coordinates z and their conjugates
zb (needed for smooth (0,q) data) but never on t-conjugates.
"""

import json

from .scalars import Poly, P_ONE, parse_poly, QI_ONE

# ---------------------------------------------------------------------------
# multi-indices (plain int tuples)

def leq(a, b):
    """Componentwise a <= b; the partial divisibility order on monomials."""
    if len(a) != len(b):
        raise ValueError("length mismatch: %r vs %r" % (a, b))
    return all(x <= y for x, y in zip(a, b))


def mi_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mi_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mi_max(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mi_sub_clamped(a, b):
    return tuple(max(x - y, 0) for x, y in zip(a, b))


def grlex_key(m):
    """Graded lexicographic with t1 > t2 > ...; sorts 1, t1, t2, t1^2, ..."""
    return (sum(m), tuple(-e for e in m))


def iter_box(bounds):
    """All multi-indices m with m <= bounds, in grlex order."""
    out = [()]
    for b in bounds:
        out = [m + (e,) for m in out for e in range(b + 1)]
    return sorted(out, key=grlex_key)


def validate_multiindex(m, kappa):
    m = tuple(int(e) for e in m)
    if len(m) != kappa:
        raise ValueError("multi-index %r has length %d, expected %d"
                         % (m, len(m), kappa))
    if any(e < 0 for e in m):
        raise ValueError("negative entry in multi-index %r" % (m,))
    return m


class SpaceShape:
    """Ambient dimensions: base n, fiber codimension kappa, cap degrees M."""

    __slots__ = ("n", "kappa", "M")

    def __init__(self, n, kappa, M):
        if n < 0 or kappa < 1:
            raise ValueError("need n >= 0 and kappa >= 1")
        self.n = n
        self.kappa = kappa
        self.M = validate_multiindex(M, kappa)

    @property
    def N(self):
        return self.n + self.kappa

    def base_vars(self):
        return ["z%d" % (i + 1) for i in range(self.n)]

    def base_conj_vars(self):
        return ["zb%d" % (i + 1) for i in range(self.n)]

    def fiber_vars(self):
        return ["t%d" % (j + 1) for j in range(self.kappa)]

    def __eq__(self, other):
        return (self.n, self.kappa, self.M) == (other.n, other.kappa, other.M)

    def __repr__(self):
        return "SpaceShape(n=%d, kappa=%d, M=%r)" % (self.n, self.kappa, self.M)


class MonomialIdeal:
    """Ideal in the fiber variables generated by monomials t^g.

    Generators are kept minimal.  The shape's cap degrees M must satisfy
    <t^(M+1)> subset of the ideal, i.e. each axis has a pure-power generator
    t_j^e with e <= M_j + 1.
    """

    __slots__ = ("generators", "shape")

    def __init__(self, generators, shape):
        gens = minimalize([validate_multiindex(g, shape.kappa)
                           for g in generators])
        for j in range(shape.kappa):
            cap = shape.M[j] + 1
            ok = any(all(g[i] == 0 for i in range(shape.kappa) if i != j)
                     and 0 < g[j] <= cap for g in gens)
            if not ok:
                raise ValueError(
                    "no pure power t%d^e with e <= %d among generators %r"
                    % (j + 1, cap, sorted(gens)))
        self.generators = frozenset(gens)
        self.shape = shape

    @staticmethod
    def simple(shape):
        """The simple ideal <t^(M+1)> of pure powers."""
        k = shape.kappa
        gens = [tuple(shape.M[j] + 1 if i == j else 0 for i in range(k))
                for j in range(k)]
        return MonomialIdeal(gens, shape)

    def contains_monomial(self, m):
        return any(leq(g, m) for g in self.generators)

    def is_simple(self):
        return self == MonomialIdeal.simple(self.shape)

    def standard_monomials(self):
        """Exponents of the monomial basis of O/J, grlex sorted."""
        return [m for m in iter_box(self.shape.M)
                if not self.contains_monomial(m)]

    def colon(self, other):
        """Minimal generators of the colon ideal (self : other)."""
        pieces = [frozenset(mi_sub_clamped(g, p) for g in self.generators)
                  for p in other.generators]
        acc = pieces[0]
        for piece in pieces[1:]:
            acc = frozenset(mi_max(a, b) for a in acc for b in piece)
        return sorted(minimalize(acc), key=grlex_key)

    def __eq__(self, other):
        return (self.generators == other.generators
                and self.shape == other.shape)

    def __repr__(self):
        gens = ", ".join(mono_name(g) for g in sorted(self.generators))
        return "MonomialIdeal(<%s>)" % gens


def minimalize(gens):
    """Drop generators divisible by another generator."""
    gens = sorted(set(gens), key=grlex_key)
    out = []
    for g in gens:
        if not any(leq(h, g) for h in out):
            out.append(g)
    return out


def mono_name(m):
    parts = ["t%d" % (j + 1) if e == 1 else "t%d^%d" % (j + 1, e)
             for j, e in enumerate(m) if e]
    return "*".join(parts) if parts else "1"


class JetPoly:
    """Element of O_U/J in normal form: dict fiber exponent -> Poly in z, zb."""

    __slots__ = ("terms", "shape")

    def __init__(self, terms, shape):
        self.terms = {m: p for m, p in terms.items() if p}
        self.shape = shape

    @staticmethod
    def zero(shape):
        return JetPoly({}, shape)

    @staticmethod
    def one(shape):
        return JetPoly({(0,) * shape.kappa: P_ONE}, shape)

    @staticmethod
    def monomial(m, shape, coeff=None):
        m = validate_multiindex(m, shape.kappa)
        return JetPoly({m: coeff if coeff is not None else P_ONE}, shape)

    @staticmethod
    def from_poly(p, shape):
        """Split a Poly in z/zb/t variables by its fiber exponents."""
        fiber = shape.fiber_vars()
        out = {}
        for mono, c in p.terms.items():
            d = dict(mono)
            m = tuple(d.pop(v, 0) for v in fiber)
            base = tuple(sorted(d.items()))
            for v, _ in base:
                if v.startswith("t"):
                    raise ValueError("fiber variable %s outside range" % v)
            cur = out.setdefault(m, {})
            c2 = cur.get(base, None)
            cur[base] = c if c2 is None else c2 + c
        return JetPoly({m: Poly({k: v for k, v in t.items() if v})
                        for m, t in out.items()}, shape)

    def to_poly(self):
        """Flatten back to a Poly including the t-monomials."""
        out = Poly()
        for m, c in self.terms.items():
            t = P_ONE
            for j, e in enumerate(m):
                if e:
                    t = t * Poly.var("t%d" % (j + 1), e)
            out = out + c * t
        return out

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        _check_shape(self, other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            c2 = t.get(m, Poly()) + c
            if c2:
                t[m] = c2
            else:
                t.pop(m, None)
        return JetPoly(t, self.shape)

    def __neg__(self):
        return JetPoly({m: -c for m, c in self.terms.items()}, self.shape)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return self.shape == other.shape and self.terms == other.terms

    def scaled(self, c):
        return JetPoly({m: p * c for m, p in self.terms.items()}, self.shape)

    def raw_mul(self, other):
        """Product without ideal reduction."""
        _check_shape(self, other)
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mi_add(m1, m2)
                c = t.get(m, Poly()) + c1 * c2
                if c:
                    t[m] = c
                else:
                    t.pop(m, None)
        return JetPoly(t, self.shape)

    def eval_fiber_deriv(self, m):
        """Coefficient of t^m (equals the m-th fiber derivative over m!)."""
        return self.terms.get(validate_multiindex(m, self.shape.kappa), Poly())

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, key=grlex_key):
            c = self.terms[m]
            cs = repr(c)
            if len(c.terms) > 1:
                cs = "(%s)" % cs
            name = mono_name(m)
            bits.append(cs if name == "1" else
                        (name if cs == "1" else "%s*%s" % (cs, name)))
        return " + ".join(bits)


def _check_shape(a, b):
    if a.shape != b.shape:
        raise ValueError("shape mismatch: %r vs %r" % (a.shape, b.shape))


def normal_form(p, ideal):
    """Normal form of a JetPoly modulo a monomial ideal: delete every term
    whose fiber exponent is divisible by a generator.  Idempotent."""
    if p.shape != ideal.shape:
        raise ValueError("shape mismatch between polynomial and ideal")
    return JetPoly({m: c for m, c in p.terms.items()
                    if not ideal.contains_monomial(m)}, p.shape)


def standard_monomials(ideal):
    """Monomials outside the ideal, grlex sorted; basis of O/J over O_Z."""
    return ideal.standard_monomials()


def jet_mul(p, q, ideal):
    """Product in O/J: multiply then reduce."""
    return normal_form(p.raw_mul(q), ideal)


def parse_jet(text, shape):
    return JetPoly.from_poly(parse_poly(text), shape)


def load_space(path_or_dict):
    """Space description file: {"n":..,"kappa":..,"M":[..],"ideal":[monomial
    strings]}; "ideal" defaults to the simple ideal <t^(M+1)>."""
    if isinstance(path_or_dict, dict):
        data = path_or_dict
    else:
        with open(path_or_dict) as f:
            data = json.load(f)
    shape = SpaceShape(int(data["n"]), int(data["kappa"]),
                       [int(x) for x in data["M"]])
    if "ideal" not in data or data["ideal"] is None:
        return shape, MonomialIdeal.simple(shape)
    gens = []
    for s in data["ideal"]:
        p = parse_poly(s)
        if len(p.terms) != 1:
            raise ValueError("ideal generator %r is not a monomial" % s)
        (mono, c), = p.terms.items()
        if c != QI_ONE:
            raise ValueError("ideal generator %r has coefficient != 1" % s)
        exps = dict(mono)
        g = [0] * shape.kappa
        for v, e in exps.items():
            if not (v.startswith("t") and v[1:].isdigit()):
                raise ValueError("non-fiber variable %s in ideal generator" % v)
            j = int(v[1:])
            if not 1 <= j <= shape.kappa:
                raise ValueError("fiber index out of range in %r" % s)
            g[j - 1] = e
        gens.append(tuple(g))
    return shape, MonomialIdeal(gens, shape)
