"""
Exact scalars: rationals and polynomials in an infinitesimal ``eps``.

An :class:`EpsScalar` is a polynomial ``c0 + c1*eps + c2*eps^2 + ...`` with
rational coefficients.  It is read as an element of the real closed field
of algebraic Puiseux series in a positive infinitesimal, so its sign is the
sign of its lowest order nonzero coefficient.

Every time the sign of a genuinely eps-dependent quantity is decided, the
quantity is recorded in the active :class:`EpsLedger` (if any).  The ledger
later yields a rational ``a > 0`` such that every recorded sign is unchanged
when ``eps`` is replaced by any value in ``(0, a]``.
"""

from fractions import Fraction
import threading

__all__ = [
    "EpsScalar", "EPS", "EpsLedger", "eps_ledger", "active_ledger",
    "as_rational", "scalar_sign", "limit_eps", "is_scalar", "norm_scalar",
    "cauchy_root_gap",
]


def norm_scalar(c):
    """Return ``c`` in canonical form: int if integral, EpsScalar only if eps occurs."""
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, EpsScalar):
        if len(c.coeffs) <= 1:
            return norm_scalar(c.coeffs[0]) if c.coeffs else 0
        return c
    raise TypeError("not an exact scalar: %r" % (c,))


def as_rational(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    if isinstance(c, EpsScalar) and len(c.coeffs) <= 1:
        return Fraction(c.coeffs[0]) if c.coeffs else Fraction(0)
    raise ValueError("scalar depends on eps: %s" % (c,))


def is_scalar(c):
    return isinstance(c, (int, Fraction, EpsScalar))


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(c.numerator if isinstance(c, Fraction) and c.denominator == 1 else c
                 for c in coeffs)


class EpsScalar:
    """Polynomial in ``eps`` with rational coefficients, lowest degree first.

    Examples
    ========

    >>> from babygiant.arith import EPS, scalar_sign
    >>> scalar_sign(EPS - EPS**2)
    1
    >>> scalar_sign(-3 * EPS**2 + EPS**5)
    -1
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs=()):
        self.coeffs = _trim(coeffs)
        self._hash = None

    @staticmethod
    def lift(c):
        if isinstance(c, EpsScalar):
            return c
        return EpsScalar((c,))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not is_scalar(other):
            return NotImplemented
        a, b = self.coeffs, EpsScalar.lift(other).coeffs
        n = max(len(a), len(b))
        out = [0] * n
        for i, c in enumerate(a):
            out[i] += c
        for i, c in enumerate(b):
            out[i] += c
        return norm_scalar(EpsScalar(out))

    __radd__ = __add__

    def __neg__(self):
        return EpsScalar(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if not is_scalar(other):
            return NotImplemented
        return self + (-EpsScalar.lift(other))

    def __rsub__(self, other):
        return EpsScalar.lift(other) - self

    def __mul__(self, other):
        if not is_scalar(other):
            return NotImplemented
        b = EpsScalar.lift(other).coeffs
        a = self.coeffs
        if not a or not b:
            return 0
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return norm_scalar(EpsScalar(out))

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only natural powers")
        result, base = 1, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        """Exact division.  Raises ValueError when the quotient is not a polynomial."""
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return norm_scalar(EpsScalar(tuple(Fraction(c) / other for c in self.coeffs)))
        if not isinstance(other, EpsScalar):
            return NotImplemented
        q, r = eps_divmod(self, other)
        if r != 0:
            raise ValueError("inexact division in Q[eps]")
        return q

    def __rtruediv__(self, other):
        return EpsScalar.lift(other) / self

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, EpsScalar):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.coeffs
            return len(self.coeffs) == 1 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(norm_scalar(self)) if len(self.coeffs) <= 1 else hash(self.coeffs)
        return self._hash

    def __lt__(self, other):
        return scalar_sign(self - other) < 0

    def __gt__(self, other):
        return scalar_sign(self - other) > 0

    def __le__(self, other):
        return scalar_sign(self - other) <= 0

    def __ge__(self, other):
        return scalar_sign(self - other) >= 0

    def __bool__(self):
        return bool(self.coeffs)

    def order(self):
        """Index of the lowest nonzero coefficient, or None for zero."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def degree(self):
        return len(self.coeffs) - 1

    def evaluate(self, value):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def __repr__(self):
        return "EpsScalar(%s)" % (str(self),)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mon = "" if i == 0 else ("eps" if i == 1 else "eps^%d" % i)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append("%s*%s" % (_paren(c), mon))
        return " + ".join(parts).replace("+ -", "- ")


def _paren(c):
    s = str(c)
    return "(%s)" % s if "/" in s else s


def eps_divmod(a, b):
    a = list(EpsScalar.lift(a).coeffs)
    b = EpsScalar.lift(b).coeffs
    if not b:
        raise ZeroDivisionError("division by zero")
    lb = Fraction(b[-1])
    q = [0] * max(len(a) - len(b) + 1, 0)
    for i in range(len(a) - len(b), -1, -1):
        c = Fraction(a[i + len(b) - 1]) / lb
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return norm_scalar(EpsScalar(q)), norm_scalar(EpsScalar(a[:len(b) - 1]))


EPS = EpsScalar((0, 1))


# ledger -----------------------------------------------------------------

class EpsLedger:
    """Collects every eps-dependent quantity whose sign was decided.

    Entries are lists of coefficient enclosures ``(lo, hi)`` of a polynomial
    in eps; exact rational coefficients have ``lo == hi``.
    """

    def __init__(self):
        self.entries = []
        self._seen = set()

    def record(self, enclosures):
        key = tuple(enclosures)
        if key in self._seen:
            return
        self._seen.add(key)
        self.entries.append(key)

    def record_scalar(self, c):
        if isinstance(c, EpsScalar) and len(c.coeffs) > 1:
            self.record([(Fraction(x), Fraction(x)) for x in c.coeffs])

    def safe_value(self):
        """Rational ``a`` with every recorded sign constant on ``(0, a]``.

        For a recorded polynomial whose lowest order coefficient is ``a_q``
        the bound ``min(1, |a_q| / sum |a_i|)`` is used, which excludes all
        nonzero roots.
        """
        best = Fraction(1)
        for enc in self.entries:
            q = None
            for i, (lo, hi) in enumerate(enc):
                if lo > 0 or hi < 0:
                    q = i
                    break
            if q is None:
                continue
            lo, hi = enc[q]
            low_mag = min(abs(lo), abs(hi))
            total = sum(max(abs(l), abs(h)) for l, h in enc[q + 1:])
            if total == 0:
                continue
            best = min(best, low_mag / (low_mag + total))
        return best


_state = threading.local()


def active_ledger():
    return getattr(_state, "ledger", None)


class eps_ledger:
    """Context manager installing a fresh :class:`EpsLedger`."""

    def __init__(self, ledger=None):
        self.ledger = ledger if ledger is not None else EpsLedger()

    def __enter__(self):
        self._prev = active_ledger()
        _state.ledger = self.ledger
        return self.ledger

    def __exit__(self, *exc):
        _state.ledger = self._prev
        return False


def scalar_sign(c):
    """Sign in the ordered field with a positive infinitesimal eps."""
    if isinstance(c, (int, Fraction)):
        return (c > 0) - (c < 0)
    if isinstance(c, EpsScalar):
        for x in c.coeffs:
            if x != 0:
                if len(c.coeffs) > 1:
                    ledger = active_ledger()
                    if ledger is not None:
                        ledger.record_scalar(c)
                return (x > 0) - (x < 0)
        return 0
    raise TypeError("not an exact scalar: %r" % (c,))


def limit_eps(c):
    """Value at eps = 0.  Defined for every bounded element, which all of Q[eps] are."""
    if isinstance(c, EpsScalar):
        return norm_scalar(c.coeffs[0]) if c.coeffs else 0
    return norm_scalar(c)


def cauchy_root_gap(coeffs):
    """Lower bound for the smallest positive root of a polynomial in eps."""
    enc = [(Fraction(c), Fraction(c)) for c in coeffs]
    ledger = EpsLedger()
    ledger.record(enc)
    return ledger.safe_value()
