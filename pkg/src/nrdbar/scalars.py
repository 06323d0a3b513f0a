"""Exact scalar arithmetic: Gaussian rationals, sparse multivariate polynomials
and rational functions over Q(i).

Variables are plain strings.  Conventional names used throughout the package:
z1..zn / zb1..zbn for the base coordinates and their conjugates, t1..tk /
tb1..tbk for the fiber coordinates, v*/vb* and w*/wb* for the output-side
copies of the same, and TPI for the symbolic unit 2*pi*i.  TPI is the only
variable that may carry negative exponents.
"""

from fractions import Fraction

TPI = "TPI"
TPI_NUMERIC = 2j * 3.141592653589793238462643383279502884


class QI:
    """A Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        other = _as_qi(other)
        return QI(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_as_qi(other))

    def __rsub__(self, other):
        return _as_qi(other) + (-self)

    def __mul__(self, other):
        other = _as_qi(other)
        return QI(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_qi(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return QI((self.re * other.re + self.im * other.im) / n,
                  (self.im * other.re - self.re * other.im) / n)

    def __eq__(self, other):
        other = _as_qi(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def conj(self):
        return QI(self.re, -self.im)

    def to_complex(self):
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return "%s*i" % self.im
        sign = "+" if self.im > 0 else "-"
        return "%s%s%s*i" % (self.re, sign, abs(self.im))


QI_ZERO = QI(0)
QI_ONE = QI(1)
QI_I = QI(0, 1)


def _as_qi(x):
    if isinstance(x, QI):
        return x
    if isinstance(x, (int, Fraction)):
        return QI(x)
    raise TypeError("cannot coerce %r to Q(i)" % (x,))


# A monomial is a tuple of (variable, exponent) pairs, sorted by variable,
# with all exponents nonzero.  The empty tuple is the constant monomial.

MONO_ONE = ()


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        e2 = d.get(v, 0) + e
        if e2:
            d[v] = e2
        else:
            del d[v]
    return tuple(sorted(d.items()))


def mono_str(m):
    if not m:
        return "1"
    return "*".join(v if e == 1 else "%s^%d" % (v, e) for v, e in m)


class Poly:
    """Sparse polynomial: dict monomial -> QI coefficient.

    Treated as immutable; all operations return new instances.  Exponents are
    non-negative except for the TPI unit, which is Laurent.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms or {}

    @staticmethod
    def const(c):
        c = c if isinstance(c, QI) else QI(c)
        return Poly({MONO_ONE: c}) if c else Poly()

    @staticmethod
    def var(name, exp=1):
        if exp == 0:
            return P_ONE
        if exp < 0 and name != TPI:
            raise ValueError("negative exponent on %s" % name)
        return Poly({((name, exp),): QI_ONE})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = _as_poly(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            c2 = t.get(m, QI_ZERO) + c
            if c2:
                t[m] = c2
            else:
                t.pop(m, None)
        return Poly(t)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QI)):
            c0 = other if isinstance(other, QI) else QI(other)
            if not c0:
                return Poly()
            return Poly({m: c * c0 for m, c in self.terms.items()})
        other = _as_poly(other)
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = t.get(m, QI_ZERO) + c1 * c2
                if c:
                    t[m] = c
                else:
                    t.pop(m, None)
        return Poly(t)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative polynomial power")
        r = P_ONE
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, other):
        return self.terms == _as_poly(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def diff(self, var):
        t = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(var, 0)
            if e == 0:
                continue
            if e < 0:
                raise ValueError("cannot differentiate Laurent variable %s" % var)
            if e == 1:
                del d[var]
            else:
                d[var] = e - 1
            m2 = tuple(sorted(d.items()))
            c2 = t.get(m2, QI_ZERO) + c * e
            if c2:
                t[m2] = c2
            else:
                t.pop(m2, None)
        return Poly(t)

    def subs(self, env):
        """Substitute variables by polynomials; env maps name -> Poly|int."""
        out = Poly()
        for m, c in self.terms.items():
            term = Poly.const(c)
            for v, e in m:
                if v in env:
                    term = term * (_as_poly(env[v]) ** e)
                else:
                    term = term * Poly.var(v, e)
            out = out + term
        return out

    def coeffs_in(self, var):
        """Collect as dict degree -> Poly in the remaining variables."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.pop(var, 0)
            m2 = tuple(sorted(d.items()))
            p = out.setdefault(e, {})
            c2 = p.get(m2, QI_ZERO) + c
            if c2:
                p[m2] = c2
            else:
                p.pop(m2, None)
        return {e: Poly(t) for e, t in out.items() if t}

    def degree(self, var=None):
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e for _, e in m) for m in self.terms)
        return max((dict(m).get(var, 0) for m in self.terms), default=0)

    def variables(self):
        s = set()
        for m in self.terms:
            for v, _ in m:
                s.add(v)
        return s

    def eval(self, env):
        """Numeric evaluation; env maps variable -> complex.  TPI defaults
        to its numeric value 2*pi*i."""
        total = 0j
        for m, c in self.terms.items():
            val = c.to_complex()
            for v, e in m:
                if v in env:
                    val *= env[v] ** e
                elif v == TPI:
                    val *= TPI_NUMERIC ** e
                else:
                    raise KeyError("unbound variable %s" % v)
            total += val
        return total

    def conj_vars(self, pairs):
        """Formal conjugate: swap variable names per pairs dict and conjugate
        coefficients.  pairs must contain both directions."""
        t = {}
        for m, c in self.terms.items():
            m2 = tuple(sorted((pairs.get(v, v), e) for v, e in m))
            t[m2] = c.conj()
        return Poly(t)

    def __repr__(self):
        return poly_str(self)


P_ZERO = Poly()
P_ONE = Poly({MONO_ONE: QI_ONE})


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction, QI)):
        return Poly.const(x)
    raise TypeError("cannot coerce %r to Poly" % (x,))


def poly_str(p):
    if not p.terms:
        return "0"
    parts = []
    for m in sorted(p.terms, key=lambda m: (-sum(e for _, e in m), m)):
        c = p.terms[m]
        cs = repr(c)
        if "+" in cs[1:] or "-" in cs[1:]:
            cs = "(%s)" % cs
        if m == MONO_ONE:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono_str(m))
        elif cs == "-1":
            parts.append("-%s" % mono_str(m))
        else:
            parts.append("%s*%s" % (cs, mono_str(m)))
    s = " + ".join(parts)
    return s.replace("+ -", "- ")


def telescope_quotient(p, var, ovar):
    """Exact quotient q with p - p[var:=ovar] = (var - ovar) * q.

    Uses x^k - o^k = (x - o) * sum_{a+b=k-1} x^a o^b termwise, so no
    polynomial division is ever performed.
    """
    q = Poly()
    for e, coeff in p.coeffs_in(var).items():
        for a in range(e):
            q = q + coeff * Poly.var(var, a) * Poly.var(ovar, e - 1 - a)
    return q


class RatFun:
    """Rational function num/den over Q(i).  Zero tests are exact (num == 0);
    no gcd cancellation is attempted beyond trivial cases."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_poly(num)
        den = P_ONE if den is None else _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = P_ONE
        elif len(den.terms) == 1 and MONO_ONE in den.terms:
            c = den.terms[MONO_ONE]
            if c != QI_ONE:
                num = num * (QI_ONE / c)
            den = P_ONE
        self.num = num
        self.den = den

    @staticmethod
    def const(c):
        return RatFun(Poly.const(c))

    @staticmethod
    def var(name, exp=1):
        return RatFun(Poly.var(name, exp))

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self):
        return self.den == P_ONE

    def __add__(self, other):
        other = _as_rat(other)
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den,
                      self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rat(other))

    def __rsub__(self, other):
        return _as_rat(other) + (-self)

    def __mul__(self, other):
        other = _as_rat(other)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rat(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        other = _as_rat(other)
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        raise TypeError("RatFun is unhashable")

    def diff(self, var):
        if self.den == P_ONE:
            return RatFun(self.num.diff(var))
        return RatFun(self.num.diff(var) * self.den - self.num * self.den.diff(var),
                      self.den * self.den)

    def subs(self, env):
        den = self.den.subs(env)
        return RatFun(self.num.subs(env), den)

    def eval(self, env):
        d = self.den.eval(env)
        return self.num.eval(env) / d

    def __repr__(self):
        if self.den == P_ONE:
            return poly_str(self.num)
        return "(%s)/(%s)" % (poly_str(self.num), poly_str(self.den))


RF_ZERO = RatFun(P_ZERO)
RF_ONE = RatFun(P_ONE)


def _as_rat(x):
    if isinstance(x, RatFun):
        return x
    if isinstance(x, (Poly, int, Fraction, QI)):
        return RatFun(_as_poly(x))
    raise TypeError("cannot coerce %r to RatFun" % (x,))


class ParseError(ValueError):
    pass


def parse_poly(text):
    """Parse the polynomial grammar used by space and form files.

    Variables are identifiers (z1, zb2, t1, w1, ...); coefficients are
    integers, rationals a/b, and the imaginary unit i; operators + - * ^ and
    parentheses.  Juxtaposition is not multiplication: use '*'.
    """
    tokens = _tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take(kind=None):
        tok = peek()
        if tok is None or (kind is not None and tok[0] != kind):
            raise ParseError("unexpected %r at token %d in %r"
                             % (tok, pos[0], text))
        pos[0] += 1
        return tok

    def parse_expr():
        if peek() and peek()[0] in "+-":
            sign = take()[0]
            node = parse_term()
            if sign == "-":
                node = -node
        else:
            node = parse_term()
        while peek() and peek()[0] in "+-":
            op = take()[0]
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term():
        node = parse_factor()
        while peek() and peek()[0] == "*":
            take()
            node = node * parse_factor()
        return node

    def parse_factor():
        if peek() and peek()[0] == "-":
            take()
            return -parse_factor()
        node = parse_atom()
        if peek() and peek()[0] == "^":
            take()
            esign = 1
            if peek() and peek()[0] == "-":
                take()
                esign = -1
            e = take("int")[1] * esign
            if isinstance(node, Poly) and len(node.terms) == 1 \
                    and list(node.terms.values())[0] == QI_ONE and e < 0:
                (m,) = node.terms
                if len(m) == 1 and m[0][0] == TPI:
                    return Poly.var(TPI, m[0][1] * e)
            if e < 0:
                raise ParseError("negative exponent outside TPI in %r" % text)
            node = node ** e
        return node

    def parse_atom():
        tok = peek()
        if tok is None:
            raise ParseError("unexpected end of input in %r" % text)
        if tok[0] == "int":
            take()
            val = Fraction(tok[1])
            if peek() and peek()[0] == "/":
                take()
                val = val / take("int")[1]
            return Poly.const(QI(val))
        if tok[0] == "name":
            take()
            if tok[1] == "i":
                return Poly.const(QI_I)
            return Poly.var(tok[1])
        if tok[0] == "(":
            take()
            node = parse_expr()
            take(")")
            return node
        raise ParseError("unexpected token %r in %r" % (tok, text))

    node = parse_expr()
    if pos[0] != len(tokens):
        raise ParseError("trailing input in %r" % text)
    return node


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j])))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
        elif ch in "+-*^/()":
            tokens.append((ch, ch))
            i += 1
        else:
            raise ParseError("bad character %r in %r" % (ch, text))
    return tokens
