"""Formal Coleff-Herrera current calculus on C^n_z x C^k_t with support on
{t = 0}.

A CHCurrent is a finite sum over multi-indices alpha >= 0 of

    a_alpha(z, zb)  (x)  dbar(dt / t^(alpha+1)) ^ dz,

stored as a dict alpha -> FormExpr coefficient.  Coefficients may carry dzb
words and rational-function scalars (denominators like |z|^2); they never
contain fiber variables or their conjugates.  Monomial multiplication acts by
the pole-shift law t^beta * dbar(dt/t^(alpha+1)) = dbar(dt/t^(alpha-beta+1)),
with the term deleted as soon as a pole order drops to zero.
"""

import json

from .scalars import Poly, RatFun, QI_ONE, parse_poly, TPI
from .forms import FormExpr, F_ONE, _as_form
from .multiindex_jets import (SpaceShape, MonomialIdeal, JetPoly, leq, mi_sub,
                              grlex_key, validate_multiindex, mono_name)

_COEFF_KINDS_ALLOWED = {"dzb"}


class CHCurrent:
    """dict alpha -> FormExpr; see module docstring for the meaning."""

    __slots__ = ("terms", "shape")

    def __init__(self, terms, shape):
        clean = {}
        for a, c in terms.items():
            a = validate_multiindex(a, shape.kappa)
            c = _as_form(c)
            if c.is_zero():
                continue
            bad = c.gen_kinds() - _COEFF_KINDS_ALLOWED
            if bad:
                raise ValueError("coefficient carries generators %r" % bad)
            for w, r in c.terms.items():
                vs = r.num.variables() | r.den.variables()
                for v in vs:
                    if v.startswith(("t", "w")) and v != TPI:
                        raise ValueError("fiber variable %s in coefficient" % v)
            clean[a] = c
        self.terms = clean
        self.shape = shape

    @staticmethod
    def zero(shape):
        return CHCurrent({}, shape)

    @staticmethod
    def basis(alpha, shape, coeff=None):
        """The current dbar(dt/t^(alpha+1)) ^ dz times an optional coefficient."""
        return CHCurrent({tuple(alpha): coeff if coeff is not None else F_ONE},
                         shape)

    @staticmethod
    def hat_mu(shape):
        """Generator for the simple ideal <t^(M+1)>: single term alpha = M."""
        return CHCurrent({shape.M: F_ONE}, shape)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        _same_shape(self, other)
        t = dict(self.terms)
        for a, c in other.terms.items():
            c2 = t.get(a)
            c2 = c if c2 is None else c2 + c
            if c2.is_zero():
                t.pop(a, None)
            else:
                t[a] = c2
        return CHCurrent(t, self.shape)

    def __neg__(self):
        return CHCurrent({a: -c for a, c in self.terms.items()}, self.shape)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (self - other).is_zero()

    def scaled(self, c):
        """Multiply by a base scalar (Poly/RatFun in z, zb)."""
        return CHCurrent({a: f * c for a, f in self.terms.items()}, self.shape)

    def wedged(self, form):
        """Left wedge by a base form (dzb words only)."""
        form = _as_form(form)
        return CHCurrent({a: form * f for a, f in self.terms.items()},
                         self.shape)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for a in sorted(self.terms, key=grlex_key):
            pole = tuple(e + 1 for e in a)
            bits.append("(%r) db[1/%s]" % (self.terms[a], mono_name(pole)))
        return " + ".join(bits)


def _same_shape(a, b):
    if a.shape != b.shape:
        raise ValueError("shape mismatch")


def mul_monomial(mu, beta):
    """t^beta times the current: index shift, terms dying when beta > alpha."""
    beta = validate_multiindex(beta, mu.shape.kappa)
    t = {}
    for a, c in mu.terms.items():
        if leq(beta, a):
            a2 = mi_sub(a, beta)
            c2 = t.get(a2)
            c2 = c if c2 is None else c2 + c
            if not c2.is_zero():
                t[a2] = c2
            else:
                t.pop(a2, None)
    return CHCurrent(t, mu.shape)


def mul_jet(mu, p):
    """Multiply by a JetPoly: each term c_m(z, zb) t^m shifts by m."""
    out = CHCurrent.zero(mu.shape)
    for m, c in p.terms.items():
        out = out + mul_monomial(mu, m).scaled(c)
    return out


def smooth_times(mu, num, den=None):
    """Multiply by a smooth factor num/den given as Poly in z, zb, t, tb.

    Annihilation by conjugate fiber variables makes this computable: numerator
    monomials containing any tb die, the denominator is evaluated at tb = 0
    (it must then be fiber-free), and remaining t-powers shift the current.
    """
    kappa = mu.shape.kappa
    tbzero = {"tb%d" % (j + 1): Poly() for j in range(kappa)}
    num0 = num.subs(tbzero)
    out = CHCurrent.zero(mu.shape)
    if den is None:
        den0 = None
    else:
        den0 = den.subs(tbzero)
        if any(v.startswith("t") for v in den0.variables()):
            raise ValueError("denominator has fiber dependence at tb = 0")
    for m, c in JetPoly.from_poly(num0, mu.shape).terms.items():
        factor = RatFun(c) if den0 is None else RatFun(c, den0)
        out = out + mul_monomial(mu, m).scaled(factor)
    return out


def annihilates(mu, p):
    """True iff the JetPoly p annihilates the current (duality test)."""
    return mul_jet(mu, p).is_zero()


def dbar_current(mu):
    """Coefficientwise dbar in the base variables."""
    pairs = [("zb%d" % (i + 1), "dzb%d" % (i + 1)) for i in range(mu.shape.n)]
    return CHCurrent({a: c.dbar(pairs) for a, c in mu.terms.items()}, mu.shape)


def pair(mu, phi):
    """Pairing density on Z: sum_alpha a_alpha ^ (2 pi i)^kappa phihat_alpha ^ dz.

    phi is a JetForm (coefficients phihat_m as base forms); its fiber
    derivative of order alpha at t=0 equals alpha! phihat_alpha, which cancels
    the 1/alpha! of the action formula.  Terms of phi with conjugate fiber
    content are killed before calling this (JetForm cannot carry them).
    """
    shape = mu.shape
    dz = FormExpr.word(tuple("dz%d" % (i + 1) for i in range(shape.n)))
    tpik = Poly.var(TPI, shape.kappa)
    out = FormExpr()
    for a, c in mu.terms.items():
        ph = phi.terms.get(a)
        if ph is None:
            continue
        for w, r in ph.terms.items():
            if not r.is_polynomial():
                raise ValueError("pairing requires polynomial jet coefficients")
        out = out + c * (_as_form(ph) * tpik) * dz
    return out


def annihilator_basis(ideal):
    """Multiplier monomials gamma with gamma * J inside <t^(M+1)>.

    These are the minimal monomial generators of the colon ideal
    (<t^(M+1)> : J); the currents gamma * hat_mu then generate the module of
    Coleff-Herrera currents annihilated by J.  Generators already lying in
    <t^(M+1)> would give the zero current and are dropped.
    """
    shape = ideal.shape
    simple = MonomialIdeal.simple(shape)
    gens = [g for g in simple.colon(ideal) if not simple.contains_monomial(g)]
    if not gens:
        raise ValueError("empty annihilator basis; inconsistent ideal")
    return [JetPoly.monomial(g, shape) for g in gens]


class JetForm:
    """Symbolic (0,q)-form on the jet space: dict fiber exponent m -> base
    FormExpr (dzb words, polynomial coefficients in z, zb)."""

    __slots__ = ("terms", "shape", "q")

    def __init__(self, terms, shape, q=None):
        clean = {}
        degs = set()
        for m, f in terms.items():
            m = validate_multiindex(m, shape.kappa)
            f = _as_form(f)
            if f.is_zero():
                continue
            bad = f.gen_kinds() - {"dzb"}
            if bad:
                raise ValueError("jet form carries generators %r" % bad)
            degs.update(len(w) for w in f.terms)
            clean[m] = f
        if q is None:
            if len(degs) > 1:
                raise ValueError("mixed degrees %r; pass q explicitly" % degs)
            q = degs.pop() if degs else 0
        self.terms = clean
        self.shape = shape
        self.q = q

    @staticmethod
    def zero(shape, q=0):
        return JetForm({}, shape, q)

    @staticmethod
    def from_jetpoly(p):
        return JetForm({m: FormExpr.scalar(RatFun(c))
                        for m, c in p.terms.items()}, p.shape, 0)

    def __add__(self, other):
        _same_shape(self, other)
        t = dict(self.terms)
        for m, f in other.terms.items():
            f2 = t.get(m)
            f2 = f if f2 is None else f2 + f
            if f2.is_zero():
                t.pop(m, None)
            else:
                t[m] = f2
        return JetForm(t, self.shape, max(self.q, other.q))

    def __neg__(self):
        return JetForm({m: -f for m, f in self.terms.items()}, self.shape, self.q)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return not self.terms

    def scaled_jet(self, p):
        """Multiply by a JetPoly (no ideal reduction; exponents just add)."""
        out = {}
        for m1, f in self.terms.items():
            for m2, c in p.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                f2 = f * c
                old = out.get(m)
                f2 = f2 if old is None else old + f2
                if f2.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = f2
        return JetForm(out, self.shape, self.q)

    def reduced(self, ideal):
        return JetForm({m: f for m, f in self.terms.items()
                        if not ideal.contains_monomial(m)}, self.shape, self.q)

    def dbar(self):
        """Coefficientwise dbar in the base variables; raises the degree."""
        pairs = [("zb%d" % (i + 1), "dzb%d" % (i + 1))
                 for i in range(self.shape.n)]
        return JetForm({m: f.dbar(pairs) for m, f in self.terms.items()},
                       self.shape, self.q + 1)

    def fiber_derivative(self, var_index):
        """d/dt_j as jets: shifts exponents down with the combinatorial factor."""
        out = {}
        for m, f in self.terms.items():
            e = m[var_index]
            if e == 0:
                continue
            m2 = m[:var_index] + (e - 1,) + m[var_index + 1:]
            f2 = f * e
            old = out.get(m2)
            out[m2] = f2 if old is None else old + f2
        return JetForm(out, self.shape, self.q)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join("(%r) %s" % (self.terms[m], mono_name(m))
                          for m in sorted(self.terms, key=grlex_key))


# ---------------------------------------------------------------------------
# serialization

def current_to_obj(mu):
    entries = []
    for a in sorted(mu.terms, key=grlex_key):
        for w in sorted(mu.terms[a].terms):
            r = mu.terms[a].terms[w]
            coeff = repr(r.num) if r.is_polynomial() \
                else "(%s)/(%s)" % (repr(r.num), repr(r.den))
            entries.append({"alpha": list(a), "coeff": coeff,
                            "wedge": list(w)})
    return entries


def current_from_obj(entries, shape):
    terms = {}
    for e in entries:
        a = tuple(int(x) for x in e["alpha"])
        coeff = e["coeff"]
        if coeff.startswith("(") and ")/(" in coeff:
            ns, ds = coeff[1:-1].split(")/(")
            r = RatFun(parse_poly(ns), parse_poly(ds))
        else:
            r = RatFun(parse_poly(coeff))
        f = FormExpr.word(tuple(e.get("wedge", ())), r)
        old = terms.get(a)
        terms[a] = f if old is None else old + f
    return CHCurrent(terms, shape)


def dump_current(mu, path):
    with open(path, "w") as f:
        json.dump(current_to_obj(mu), f, indent=1, sort_keys=True)


def load_current(path, shape):
    with open(path) as f:
        return current_from_obj(json.load(f), shape)
