"""
Sparse multivariate polynomials with exact coefficients.

Coefficients are ints, Fractions or :class:`~babygiant.arith.EpsScalar`.
Variables are strings kept in a canonical order (see :func:`var_key`), and
a polynomial only mentions the variables that actually occur in it, so two
equal polynomials are structurally equal.
"""

from fractions import Fraction
from math import gcd
import re

from .arith import EpsScalar, norm_scalar, scalar_sign, is_scalar, EPS

__all__ = [
    "MultiPoly", "var_key", "sort_vars", "pseudo_remainder", "pseudo_divmod",
    "derivative_sequence", "cauchy_bound", "ParseError", "parse_poly",
    "poly", "X", "lcm_denominator", "DivisionError",
]


class DivisionError(ValueError):
    pass


_RANK = {"eps": -1, "t": 0, "x": 1, "u": 2, "v": 3, "y": 4, "z": 5, "w": 6}
_VAR_RE = re.compile(r"([A-Za-z_]+?)(\d*)$")
_key_cache = {}


def var_key(name):
    """Sort key of a variable name: tower variables first, then x1 < x2 < ... < x10."""
    k = _key_cache.get(name)
    if k is None:
        m = _VAR_RE.match(name)
        prefix, digits = (m.group(1), m.group(2)) if m else (name, "")
        k = (_RANK.get(prefix.lower(), 9), prefix, int(digits) if digits else -1, name)
        _key_cache[name] = k
    return k


def sort_vars(names):
    return tuple(sorted(set(names), key=var_key))


def _mono_str(vars_, mono):
    parts = []
    for v, e in zip(vars_, mono):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append("%s^%d" % (v, e))
    return "*".join(parts)


class MultiPoly:
    """Polynomial as a dict from exponent tuples to nonzero coefficients.

    Examples
    ========

    >>> from babygiant.poly import X
    >>> x1, x2 = X(1), X(2)
    >>> p = (x1 + x2) ** 2
    >>> p.degree("x1"), p.total_degree()
    (2, 2)
    >>> print(p.diff("x2"))
    2*x1 + 2*x2
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms=None, vars_=()):
        # Trusted constructor: terms keyed by exponent tuples aligned with vars_.
        self.vars = tuple(vars_)
        self.terms = terms if terms is not None else {}
        self._hash = None

    # construction ---------------------------------------------------------
    @classmethod
    def from_dict(cls, terms, vars_):
        """Build from an arbitrary dict; drops zeros and unused variables."""
        vars_ = tuple(vars_)
        order = sort_vars(vars_)
        if order != vars_ or len(order) != len(vars_):
            if len(set(vars_)) != len(vars_):
                raise ValueError("repeated variable")
            perm = [vars_.index(v) for v in order]
            terms = {tuple(m[i] for i in perm): c for m, c in terms.items()}
            vars_ = order
        clean = {}
        for m, c in terms.items():
            c = norm_scalar(c)
            if c != 0:
                m = tuple(m)
                clean[m] = norm_scalar(clean.get(m, 0) + c) if m in clean else c
                if clean[m] == 0:
                    del clean[m]
        return cls(clean, vars_)._shrink()

    @classmethod
    def constant(cls, c):
        c = norm_scalar(c)
        return cls({(): c} if c != 0 else {}, ())

    @classmethod
    def var(cls, name):
        return cls({(1,): 1}, (name,))

    @staticmethod
    def coerce(x):
        if isinstance(x, MultiPoly):
            return x
        if is_scalar(x):
            return MultiPoly.constant(x)
        raise TypeError("cannot make a polynomial from %r" % (x,))

    def _shrink(self):
        if not self.vars:
            return self
        used = [False] * len(self.vars)
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        if all(used):
            return self
        keep = [i for i, u in enumerate(used) if u]
        return MultiPoly({tuple(m[i] for i in keep): c for m, c in self.terms.items()},
                         tuple(self.vars[i] for i in keep))

    def _aligned(self, other):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        vs = sort_vars(self.vars + other.vars)
        return vs, self._remap(vs), other._remap(vs)

    def _remap(self, vs):
        if vs == self.vars:
            return self.terms
        pos = [vs.index(v) for v in self.vars]
        n = len(vs)
        out = {}
        for m, c in self.terms.items():
            e = [0] * n
            for i, p in enumerate(pos):
                e[p] = m[i]
            out[tuple(e)] = c
        return out

    # basic queries ------------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.vars

    def constant_value(self):
        if self.vars:
            raise ValueError("polynomial is not constant")
        return self.terms.get((), 0)

    def variables(self):
        return self.vars

    def has_eps(self):
        return any(isinstance(c, EpsScalar) for c in self.terms.values())

    def degree(self, var=None):
        if var is None:
            if len(self.vars) > 1:
                raise ValueError("degree needs a variable")
            var = self.vars[0] if self.vars else None
        if not self.terms:
            return -1
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(m[i] for m in self.terms)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def coeffs_in(self, var):
        """Dense list of coefficients with respect to ``var``, lowest power first."""
        if not self.terms:
            return []
        if var not in self.vars:
            return [self]
        i = self.vars.index(var)
        rest = self.vars[:i] + self.vars[i + 1:]
        buckets = {}
        for m, c in self.terms.items():
            buckets.setdefault(m[i], {})[m[:i] + m[i + 1:]] = c
        d = max(buckets)
        return [MultiPoly(buckets[k], rest)._shrink() if k in buckets else ZERO
                for k in range(d + 1)]

    @classmethod
    def from_coeffs(cls, coeffs, var):
        """Inverse of :meth:`coeffs_in`."""
        acc = ZERO
        x = cls.var(var)
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    def leading_coeff(self, var):
        cs = self.coeffs_in(var)
        return cs[-1] if cs else ZERO

    def coefficient_list(self):
        return list(self.terms.values())

    # arithmetic ------------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            if not is_scalar(other):
                return NotImplemented
            other = MultiPoly.constant(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        vs, a, b = self._aligned(other)
        out = dict(a)
        for m, c in b.items():
            if m in out:
                s = norm_scalar(out[m] + c)
                if s == 0:
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return MultiPoly(out, vs)._shrink()

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            if not is_scalar(other):
                return NotImplemented
            other = MultiPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return MultiPoly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if not is_scalar(other):
                return NotImplemented
            c = norm_scalar(other)
            if c == 0:
                return ZERO
            if c == 1:
                return self
            return MultiPoly({m: norm_scalar(v * c) for m, v in self.terms.items()},
                             self.vars)
        if not self.terms or not other.terms:
            return ZERO
        vs, a, b = self._aligned(other)
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                c = c1 * c2
                if m in out:
                    out[m] = out[m] + c
                else:
                    out[m] = c
        out = {m: norm_scalar(c) for m, c in out.items()}
        out = {m: c for m, c in out.items() if c != 0}
        return MultiPoly(out, vs)._shrink()

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only natural powers")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            if other.is_constant():
                other = other.constant_value()
            else:
                return self.exact_div(other)
        if isinstance(other, EpsScalar):
            return MultiPoly({m: norm_scalar(c / other) for m, c in self.terms.items()},
                             self.vars)
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return MultiPoly({m: norm_scalar(c / Fraction(other) if not isinstance(c, EpsScalar)
                                             else c / Fraction(other))
                              for m, c in self.terms.items()}, self.vars)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        if is_scalar(other):
            return not self.vars and self.terms.get((), 0) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # calculus and substitution ---------------------------------------------------
    def diff(self, var):
        if var not in self.vars:
            return ZERO
        i = self.vars.index(var)
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = norm_scalar(c * m[i])
        return MultiPoly(out, self.vars)._shrink()

    def subs(self, mapping):
        """Substitute scalars or polynomials for variables."""
        mapping = {v: val for v, val in mapping.items() if v in self.vars}
        if not mapping:
            return self
        keep = [i for i, v in enumerate(self.vars) if v not in mapping]
        kvars = tuple(self.vars[i] for i in keep)
        repl = [(i, mapping[v]) for i, v in enumerate(self.vars) if v in mapping]
        if all(is_scalar(val) for _, val in repl):
            out = {}
            for m, c in self.terms.items():
                for i, val in repl:
                    if m[i]:
                        c = c * val ** m[i]
                c = norm_scalar(c)
                if c == 0:
                    continue
                km = tuple(m[i] for i in keep)
                out[km] = norm_scalar(out.get(km, 0) + c)
            return MultiPoly({m: c for m, c in out.items() if c != 0}, kvars)._shrink()
        powers = {}
        acc = ZERO
        for m, c in self.terms.items():
            t = MultiPoly({tuple(m[i] for i in keep): c}, kvars)
            for i, val in repl:
                if m[i]:
                    key = (i, m[i])
                    if key not in powers:
                        powers[key] = MultiPoly.coerce(val) ** m[i]
                    t = t * powers[key]
            acc = acc + t
        return acc

    def rename(self, mapping):
        vs = [mapping.get(v, v) for v in self.vars]
        return MultiPoly.from_dict(self.terms, vs)

    def eval_float(self, point):
        """Floating point value; ``point`` maps variable names to floats."""
        total = 0.0
        for m, c in self.terms.items():
            t = _float(c)
            for v, e in zip(self.vars, m):
                if e:
                    t *= point[v] ** e
            total += t
        return total

    # eps handling -------------------------------------------------------------------
    def eps_degree(self):
        d = 0
        for c in self.terms.values():
            if isinstance(c, EpsScalar):
                d = max(d, len(c.coeffs) - 1)
        return d

    def eps_parts(self):
        """List of eps-free polynomials ``[P0, P1, ...]`` with ``self = sum Pi eps^i``."""
        parts = [dict() for _ in range(self.eps_degree() + 1)]
        for m, c in self.terms.items():
            if isinstance(c, EpsScalar):
                for i, x in enumerate(c.coeffs):
                    if x != 0:
                        parts[i][m] = x
            else:
                parts[0][m] = c
        return [MultiPoly(p, self.vars)._shrink() for p in parts]

    def eps_at(self, value):
        """Replace eps by a rational value."""
        out = {}
        for m, c in self.terms.items():
            c = c.evaluate(value) if isinstance(c, EpsScalar) else c
            c = norm_scalar(c)
            if c != 0:
                out[m] = c
        return MultiPoly(out, self.vars)._shrink()

    def eps_to_var(self, name="eps"):
        """Turn eps into an ordinary polynomial variable."""
        acc = {}
        vs = sort_vars(self.vars + (name,))
        pos = vs.index(name)
        base = [vs.index(v) for v in self.vars]
        for m, c in self.terms.items():
            coeffs = c.coeffs if isinstance(c, EpsScalar) else (c,)
            for k, x in enumerate(coeffs):
                if x == 0:
                    continue
                e = [0] * len(vs)
                for i, p in enumerate(base):
                    e[p] = m[i]
                e[pos] = k
                acc[tuple(e)] = x
        return MultiPoly(acc, vs)._shrink()

    def var_to_eps(self, name="eps"):
        if name not in self.vars:
            return self
        i = self.vars.index(name)
        keep = self.vars[:i] + self.vars[i + 1:]
        out = {}
        for m, c in self.terms.items():
            km = m[:i] + m[i + 1:]
            out[km] = out.get(km, 0) + c * EPS ** m[i]
        return MultiPoly.from_dict(out, keep)

    # normal forms -------------------------------------------------------------
    def denominator_lcm(self):
        d = 1
        for c in self.terms.values():
            for x in (c.coeffs if isinstance(c, EpsScalar) else (c,)):
                if isinstance(x, Fraction):
                    d = d * x.denominator // gcd(d, x.denominator)
        return d

    def integer_content(self):
        g = 0
        for c in self.terms.values():
            for x in (c.coeffs if isinstance(c, EpsScalar) else (c,)):
                g = gcd(g, int(x))
        return g

    def primitive(self):
        """Positive rational multiple with coprime integer coefficients."""
        if not self.terms:
            return self
        p = self * self.denominator_lcm()
        g = p.integer_content()
        return p / g if g > 1 else p

    def monic_sign(self):
        """Sign of the leading coefficient in graded lex order (used for normalising)."""
        m = max(self.terms, key=lambda m: (sum(m), m))
        return scalar_sign(self.terms[m])

    def exact_div(self, other):
        """Exact quotient by ``other``; raises DivisionError when not exact."""
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if other.is_constant():
            return self / other.constant_value()
        q, r = _lex_divmod(self, other)
        if r.terms:
            raise DivisionError("inexact polynomial division")
        return q

    # printing -----------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda mc: (-sum(mc[0]), [-e for e in mc[0]]))
        out = []
        for m, c in items:
            ms = _mono_str(self.vars, m)
            if isinstance(c, EpsScalar):
                cs = "(%s)" % c
                term = cs + ("*" + ms if ms else "")
                out.append(("+", term))
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not ms:
                term = str(a)
            elif a == 1:
                term = ms
            else:
                term = "%s*%s" % (_paren(a), ms)
            out.append((sign, term))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, term in out[1:]:
            s += " %s %s" % (sign, term)
        return s

    def __repr__(self):
        return "MultiPoly(%s)" % self


def _paren(c):
    s = str(c)
    return "(%s)" % s if "/" in s else s


def _float(c):
    if isinstance(c, EpsScalar):
        raise ValueError("cannot evaluate eps numerically")
    return float(c)


ZERO = MultiPoly({}, ())
ONE = MultiPoly({(): 1}, ())


def X(i):
    """The coordinate variable ``x<i>``."""
    return MultiPoly.var("x%d" % i)


def poly(text, **kw):
    """Shorthand for :func:`parse_poly`."""
    return parse_poly(text, **kw)


def lcm_denominator(values):
    d = 1
    for v in values:
        v = Fraction(v)
        d = d * v.denominator // gcd(d, v.denominator)
    return d


def _lex_divmod(a, b):
    """Multivariate division with respect to lex order on the merged variables."""
    vs = sort_vars(a.vars + b.vars)
    at = dict(a._remap(vs))
    bt = b._remap(vs)
    lm = max(bt)
    lc = bt[lm]
    q = {}
    r = {}
    while at:
        m = max(at)
        c = at[m]
        if all(x >= y for x, y in zip(m, lm)):
            qc = _div_scalar(c, lc)
            shift = tuple(x - y for x, y in zip(m, lm))
            q[shift] = qc
            for bm, bc in bt.items():
                mm = tuple(x + y for x, y in zip(bm, shift))
                v = norm_scalar(at.get(mm, 0) - qc * bc)
                if v == 0:
                    at.pop(mm, None)
                else:
                    at[mm] = v
        else:
            r[m] = c
            del at[m]
    return MultiPoly(q, vs)._shrink(), MultiPoly(r, vs)._shrink()


def _div_scalar(c, d):
    if isinstance(d, EpsScalar) or isinstance(c, EpsScalar):
        return norm_scalar(EpsScalar.lift(c) / d)
    return norm_scalar(Fraction(c) / d)


# univariate operations on multivariate polynomials ---------------------------

def pseudo_divmod(P, Q, var, even=False):
    """Pseudo quotient and remainder ``lc(Q)^e P = C Q + R`` with ``deg R < deg Q``.

    ``e = max(deg P - deg Q + 1, 0)``, bumped to the next even integer when
    ``even`` is set so the multiplier never changes sign.
    """
    P = MultiPoly.coerce(P)
    Q = MultiPoly.coerce(Q)
    q = Q.degree(var)
    if q <= 0:
        raise DivisionError("not a divisor: divisor is constant in %s" % var)
    p = P.degree(var)
    e = max(p - q + 1, 0)
    if even and e % 2:
        e += 1
    bq = Q.coeffs_in(var)
    lc = bq[-1]
    R = P.coeffs_in(var)
    C = [ZERO] * max(p - q + 1, 0)
    steps = 0
    while len(R) - 1 >= q:
        d = len(R) - 1 - q
        top = R[-1]
        C = [c * lc for c in C]
        C[d] = C[d] + top
        R = [r * lc for r in R]
        for i, b in enumerate(bq):
            R[i + d] = R[i + d] - top * b
        while R and R[-1].is_zero():
            R.pop()
        steps += 1
    extra = e - steps
    if extra:
        f = lc ** extra
        R = [r * f for r in R]
        C = [c * f for c in C]
    return MultiPoly.from_coeffs(C, var), MultiPoly.from_coeffs(R, var)


def pseudo_remainder(P, Q, var, even=False):
    """Signed pseudo remainder of ``P`` by ``Q`` with respect to ``var``.

    Examples
    ========

    >>> from babygiant.poly import poly, pseudo_remainder
    >>> print(pseudo_remainder(poly("t^2 + 1"), poly("t^2 - 2"), "t"))
    3
    >>> print(pseudo_remainder(poly("t^3"), poly("2*t - 1"), "t"))
    1
    """
    return pseudo_divmod(P, Q, var, even)[1]


def derivative_sequence(P, var):
    """``[P, P', P'', ..., P^(deg P)]`` with respect to ``var``.

    >>> from babygiant.poly import poly, derivative_sequence
    >>> [str(d) for d in derivative_sequence(poly("t^2 - 2"), "t")]
    ['t^2 - 2', '2*t', '2']
    """
    P = MultiPoly.coerce(P)
    out = [P]
    d = P.diff(var)
    while not d.is_zero():
        out.append(d)
        d = d.diff(var)
    return out


def cauchy_bound(P, var=None):
    """Lower bound on the absolute value of the nonzero roots of a univariate ``P``.

    Returns ``min |a_q| / (|a_q| + ... )`` style bound
    ``c(P) = (sum_{i} |a_i / a_q|)^(-1)`` where ``a_q`` is the lowest nonzero
    coefficient.

    >>> from babygiant.poly import poly, cauchy_bound
    >>> cauchy_bound(poly("2*x1^3 + x1"))
    Fraction(1, 3)
    """
    P = MultiPoly.coerce(P)
    if var is None:
        if len(P.vars) != 1:
            raise ValueError("cauchy_bound needs a univariate polynomial")
        var = P.vars[0]
    cs = [c.constant_value() if c.is_constant() else None for c in P.coeffs_in(var)]
    if any(c is None for c in cs):
        raise ValueError("cauchy_bound needs rational coefficients")
    if any(isinstance(c, EpsScalar) for c in cs):
        raise ValueError("cauchy_bound needs rational coefficients")
    nz = [i for i, c in enumerate(cs) if c != 0]
    if not nz:
        raise ValueError("zero polynomial")
    q = nz[0]
    aq = abs(Fraction(cs[q]))
    total = sum(abs(Fraction(c)) for c in cs[q:])
    return aq / total


# parsing ----------------------------------------------------------------------

class ParseError(ValueError):
    """Syntax error with a 1-based line and column."""

    def __init__(self, message, line=1, col=1):
        super().__init__("%s at line %d, column %d" % (message, line, col))
        self.message = message
        self.line = line
        self.col = col


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text, line=1, col0=1):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.start(1 if m.group(1) else 2 if m.group(2) else 3) < 0:
            raise ParseError("unexpected character %r" % text[pos], line, col0 + pos)
        start = m.start(m.lastindex)
        kind = ("num", "name", "op")[m.lastindex - 1]
        toks.append((kind, m.group(m.lastindex), line, col0 + start))
        pos = m.end()
    toks.append(("end", "", line, col0 + n))
    return toks


class _Parser:
    def __init__(self, toks, allowed, allow_eps):
        self.toks = toks
        self.i = 0
        self.allowed = allowed
        self.allow_eps = allow_eps

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], tok[3])

    def expr(self):
        tok = self.peek()
        sign = 1
        if tok[1] in "+-" and tok[0] == "op":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = self.term() * sign
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            if op[1] == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero() or isinstance(rhs.constant_value(), EpsScalar):
                    self.error("division by a non-constant or zero", op)
                acc = acc / rhs.constant_value()
        return acc

    def factor(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("^", "**"):
            self.take()
            e = self.peek()
            if e[0] != "num":
                self.error("exponent must be a natural number")
            self.take()
            base = base ** int(e[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val = tok[0], tok[1]
        if kind == "num":
            return MultiPoly.constant(int(val))
        if kind == "name":
            if val == "eps" and self.allow_eps:
                return MultiPoly.constant(EPS)
            if self.allowed is not None and val not in self.allowed:
                raise ParseError("unknown variable '%s'" % val, tok[2], tok[3])
            return MultiPoly.var(val)
        if kind == "op" and val == "(":
            e = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return e
        if kind == "op" and val == "-":
            return -self.factor()
        if kind == "end":
            raise ParseError("unexpected end of input", tok[2], tok[3])
        raise ParseError("unexpected '%s'" % val, tok[2], tok[3])


def parse_poly(text, variables=None, allow_eps=True, line=1, col=1):
    """Parse a polynomial expression such as ``"x1^2 + 3/4*x2 - 1"``."""
    toks = _tokenize(text, line, col)
    p = _Parser(toks, set(variables) if variables is not None else None, allow_eps)
    if p.peek()[0] == "end":
        raise ParseError("empty expression", line, col)
    e = p.expr()
    if p.peek()[0] != "end":
        p.error("unexpected '%s'" % p.peek()[1])
    return e
