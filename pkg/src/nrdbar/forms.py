"""Exterior algebra with anticommuting generators over exact rational-function
coefficients.

A FormExpr is a finite sum of terms (coefficient) * (word), where the word is
a strictly increasing tuple of odd generators in the fixed canonical order

    dz* < dzb* < dt* < dtb* < dv* < dvb* < dw* < dwb* < e* < es*

(dz/dzb: base coordinates and conjugates on the input side, dt/dtb: fiber,
dv/dvb and dw/dwb: the output-side copies, e/es: frame vectors and their
duals).  Coefficients are RatFun over Q(i), so zero tests are exact and the
2*pi*i unit rides along as the Laurent variable TPI.
"""

from .scalars import RatFun, Poly, QI, RF_ONE, _as_rat

_KINDS = ("dz", "dzb", "dt", "dtb", "dv", "dvb", "dw", "dwb", "e", "es")
_KIND_RANK = {k: i for i, k in enumerate(_KINDS)}


def gen_rank(name):
    """Total order on generator names; raises on unknown names."""
    for kind in ("dzb", "dz", "dtb", "dt", "dvb", "dv", "dwb", "dw", "es", "e"):
        if name.startswith(kind) and name[len(kind):].isdigit():
            return (_KIND_RANK[kind], int(name[len(kind):]))
    raise ValueError("unknown generator %r" % name)


def wedge_words(w1, w2):
    """Merge two canonical words; returns (sign, word) or None if repeated."""
    if not w1:
        return 1, w2
    if not w2:
        return 1, w1
    r1 = [gen_rank(g) for g in w1]
    r2 = [gen_rank(g) for g in w2]
    out = []
    sign = 1
    i = j = 0
    while i < len(w1) and j < len(w2):
        if r1[i] == r2[j]:
            return None
        if r1[i] < r2[j]:
            out.append(w1[i])
            i += 1
        else:
            # w2[j] jumps over the remaining len(w1)-i odd generators
            if (len(w1) - i) % 2:
                sign = -sign
            out.append(w2[j])
            j += 1
    out.extend(w1[i:])
    out.extend(w2[j:])
    return sign, tuple(out)


def sort_word(word):
    """Canonicalize an arbitrary generator tuple; (sign, word) or None."""
    sign = 1
    out = ()
    for g in word:
        res = wedge_words(out, (g,))
        if res is None:
            return None
        s, out = res
        sign *= s
    return sign, out


class FormExpr:
    """Element of the exterior algebra: dict word -> RatFun coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms or {}

    @staticmethod
    def scalar(c):
        c = _as_rat(c)
        return FormExpr({(): c}) if c else FormExpr()

    @staticmethod
    def gen(name, coeff=None):
        gen_rank(name)
        c = RF_ONE if coeff is None else _as_rat(coeff)
        return FormExpr({(name,): c}) if c else FormExpr()

    @staticmethod
    def word(names, coeff=None):
        res = sort_word(tuple(names))
        if res is None:
            return FormExpr()
        sign, w = res
        c = _as_rat(coeff if coeff is not None else 1) * sign
        return FormExpr({w: c}) if c else FormExpr()

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (self - other).is_zero()

    def __add__(self, other):
        other = _as_form(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            c2 = t.get(w)
            c2 = c if c2 is None else c2 + c
            if c2:
                t[w] = c2
            else:
                t.pop(w, None)
        return FormExpr(t)

    __radd__ = __add__

    def __neg__(self):
        return FormExpr({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_form(other))

    def __rsub__(self, other):
        return _as_form(other) + (-self)

    def __mul__(self, other):
        """Wedge product (scalars multiply coefficientwise)."""
        if isinstance(other, (int, QI, Poly, RatFun)):
            c0 = _as_rat(other)
            if not c0:
                return FormExpr()
            return FormExpr({w: c * c0 for w, c in self.terms.items()})
        other = _as_form(other)
        t = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                res = wedge_words(w1, w2)
                if res is None:
                    continue
                sign, w = res
                c = c1 * c2 * sign
                c2o = t.get(w)
                c = c if c2o is None else c2o + c
                if c:
                    t[w] = c
                else:
                    t.pop(w, None)
        return FormExpr(t)

    def __rmul__(self, other):
        if isinstance(other, (int, QI, Poly, RatFun)):
            return self * other
        return _as_form(other) * self

    def degree(self):
        """Maximal word length (total antisymmetric degree)."""
        return max((len(w) for w in self.terms), default=0)

    def is_homogeneous(self):
        degs = {len(w) for w in self.terms}
        return len(degs) <= 1

    def component(self, predicate):
        """Subsum of terms whose word satisfies predicate(word)."""
        return FormExpr({w: c for w, c in self.terms.items() if predicate(w)})

    def drop_gens(self, kinds):
        """Delete all terms containing a generator of one of the kinds
        (kind names as in _KINDS, e.g. ("dtb", "dwb"))."""
        ranks = {_KIND_RANK[k] for k in kinds}
        def clean(w):
            return all(gen_rank(g)[0] not in ranks for g in w)
        return FormExpr({w: c for w, c in self.terms.items() if clean(w)})

    def gen_kinds(self):
        """Set of generator kind names appearing in any term."""
        return {_KINDS[gen_rank(g)[0]] for w in self.terms for g in w}

    def contract(self, valuation):
        """Odd graded contraction: generator g with valuation[g] = s becomes
        the scalar s, with the Leibniz sign from the generators it crosses."""
        out = FormExpr()
        t = {}
        for w, c in self.terms.items():
            for p, g in enumerate(w):
                s = valuation.get(g)
                if s is None:
                    continue
                w2 = w[:p] + w[p + 1:]
                c2 = c * s * (1 if p % 2 == 0 else -1)
                cold = t.get(w2)
                c2 = c2 if cold is None else cold + c2
                if c2:
                    t[w2] = c2
                else:
                    t.pop(w2, None)
        out.terms = t
        return out

    def map_coeffs(self, fn):
        t = {}
        for w, c in self.terms.items():
            c2 = fn(c)
            if c2:
                t[w] = c2
        return FormExpr(t)

    def subs(self, env):
        return self.map_coeffs(lambda c: c.subs(env))

    def dbar(self, pairs):
        """d-bar with respect to the given (conjugate variable, generator)
        pairs: sum of dgen wedge d(coeff)/d(var)."""
        out = FormExpr()
        for var, gen in pairs:
            d = self.map_coeffs(lambda c: c.diff(var))
            if d:
                out = out + FormExpr.gen(gen) * d
        return out

    def eval_coeffs(self, env):
        """Numeric coefficients: dict word -> complex."""
        return {w: c.eval(env) for w, c in self.terms.items()}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), [gen_rank(g) for g in w])):
            c = repr(self.terms[w])
            ws = "^".join(w) if w else "1"
            parts.append(ws if c == "1" else "(%s)*%s" % (c, ws))
        return " + ".join(parts)


F_ZERO = FormExpr()
F_ONE = FormExpr({(): RF_ONE})


def _as_form(x):
    if isinstance(x, FormExpr):
        return x
    if isinstance(x, (int, QI, Poly, RatFun)):
        return FormExpr.scalar(x)
    raise TypeError("cannot coerce %r to FormExpr" % (x,))


def form_matrix(rows):
    """Coerce a nested list into a matrix (list of lists) of FormExpr."""
    return [[_as_form(x) for x in row] for row in rows]


def mat_mul(a, b):
    """Matrix product with wedge products of entries, written order."""
    n, m, m2, p = len(a), len(a[0]), len(b), len(b[0])
    if m != m2:
        raise ValueError("shape mismatch %dx%d . %dx%d" % (n, m, m2, p))
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            s = FormExpr()
            for k in range(m):
                s = s + a[i][k] * b[k][j]
            row.append(s)
        out.append(row)
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[x * c for x in row] for row in a]


def mat_map(a, fn):
    return [[fn(x) for x in row] for row in a]


def mat_is_zero(a):
    return all(x.is_zero() for row in a for x in row)


def mat_identity(n):
    return [[F_ONE if i == j else FormExpr() for j in range(n)]
            for i in range(n)]
