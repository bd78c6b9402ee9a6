"""Hecke eigenvalues of holomorphic cusp forms.

The built-in form is the discriminant Delta (weight 12, level 1).  Its
coefficients tau(n) come from q * prod (1 - q^m)^24, expanded exactly.
Other forms can be read from coefficient files.
"""

from __future__ import annotations

import math
import random
import threading
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import gmpy2
import numpy as np

from .arithmetic import DirichletCharacter, divisor_count_table, factorize
from .errors import FormatError, InvariantError, ParseError, PreconditionError

TAU_MAX = 10**6
# bits per packed coefficient; |tau(n)| < d(n) n^5.5 < 2^118 for n <= 1e6
_CHUNK_BYTES = 17


@dataclass(frozen=True)
class ModularFormSpec:
    weight: int
    level: int = 1
    nebentypus: DirichletCharacter | None = None
    root_number: complex = 1.0
    label: str = ""

    def __post_init__(self):
        if self.weight < 1 or self.level < 1:
            raise PreconditionError("weight and level must be positive")
        if abs(abs(self.root_number) - 1.0) > 1e-12:
            raise InvariantError("root number must have modulus 1")

    def psi(self, n: int) -> complex:
        if self.nebentypus is None:
            return 1.0 if math.gcd(n, self.level) == 1 else 0.0
        return self.nebentypus(n)


DELTA = ModularFormSpec(weight=12, level=1, root_number=1.0, label="Delta")


@dataclass(frozen=True)
class HeckeCoefficients:
    """Normalized eigenvalues; ``lam[n]`` for ``1 <= n <= n_max`` (``lam[0]`` = 0)."""

    form: ModularFormSpec
    lam: np.ndarray = field(repr=False)
    raw: tuple | None = field(default=None, repr=False)

    @property
    def n_max(self) -> int:
        return self.lam.size - 1

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.lam)

    def conj(self) -> "HeckeCoefficients":
        """Coefficients of the dual form, conj(lambda(n))."""
        if self.is_real:
            return self
        form = ModularFormSpec(
            self.form.weight,
            self.form.level,
            self.form.nebentypus.conj() if self.form.nebentypus else None,
            complex(self.form.root_number).conjugate(),
            self.form.label + "-bar",
        )
        return HeckeCoefficients(form, np.conj(self.lam))

    def window(self, n_lo: int, n_hi: int) -> np.ndarray:
        if n_lo < 1 or n_hi > self.n_max:
            raise PreconditionError(f"coefficients only known for 1 <= n <= {self.n_max}; asked for [{n_lo}, {n_hi}]")
        return self.lam[n_lo : n_hi + 1]

    def scaled(self, factor) -> "HeckeCoefficients":
        """Test hook: a copy with every coefficient multiplied by ``factor``."""
        lam = self.lam * factor
        lam[0] = 0
        return HeckeCoefficients(self.form, lam)


def _pack(coeffs: np.ndarray) -> gmpy2.mpz:
    """Evaluate sum c_i 2^(8*_CHUNK_BYTES*i) for small signed integer coefficients."""
    out = []
    for part in (np.maximum(coeffs, 0), np.maximum(-coeffs, 0)):
        buf = np.zeros((coeffs.size, _CHUNK_BYTES), dtype=np.uint8)
        buf[:, :8] = part.astype("<u8").view(np.uint8).reshape(-1, 8)
        out.append(gmpy2.mpz(int.from_bytes(buf.tobytes(), "little")))
    return out[0] - out[1]


def _unpack_signed(value: gmpy2.mpz, n: int) -> list[int]:
    """Signed base-2^k digits of ``value`` mod 2^(k n), assuming |digit| < 2^(k-1)."""
    width = 8 * _CHUNK_BYTES
    residue = gmpy2.f_mod_2exp(value, width * n)
    data = int(residue).to_bytes(_CHUNK_BYTES * n, "little")
    half, base = 1 << (width - 1), 1 << width
    digits = []
    borrow = 0
    for i in range(n):
        d = int.from_bytes(data[i * _CHUNK_BYTES : (i + 1) * _CHUNK_BYTES], "little") + borrow
        if d >= half:
            d -= base
            borrow = 1
        else:
            borrow = 0
        digits.append(d)
    return digits


def eta_cubed(n_terms: int) -> np.ndarray:
    """Coefficients of prod (1 - q^m)^3 below q^n_terms (Jacobi's identity)."""
    out = np.zeros(n_terms, dtype=np.int64)
    k = 0
    while k * (k + 1) // 2 < n_terms:
        out[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return out


_tau_lock = threading.Lock()
_tau_cache: list[int] = []


def tau_table(n_max: int) -> list[int]:
    """Exact tau(1..n_max) as Python integers (index 0 holds 0).

    (eta^3)^8 is formed by three squarings of a Kronecker-packed integer with
    GMP, truncating to n_max terms each time.
    """
    global _tau_cache
    if not 1 <= n_max <= TAU_MAX:
        raise PreconditionError(f"n_max must lie in [1, {TAU_MAX}]")
    with _tau_lock:
        if len(_tau_cache) <= n_max:
            size = max(n_max, 2 * (len(_tau_cache) - 1), 1000)
            size = min(size, TAU_MAX)
            width = 8 * _CHUNK_BYTES * size
            packed = _pack(eta_cubed(size))
            for _ in range(3):
                packed = gmpy2.f_mod_2exp(packed * packed, width)
            _tau_cache = [0] + _unpack_signed(packed, size)
        return _tau_cache[: n_max + 1]


def naive_tau(n_max: int) -> list[int]:
    """Slow reference: multiply out prod_{m<n_max} (1 - q^m)^24 term by term."""
    series = [1] + [0] * (n_max - 1)
    for m in range(1, n_max):
        for _ in range(24):
            for i in range(n_max - 1, m - 1, -1):
                series[i] -= series[i - m]
    return [0] + series


_delta_cache: dict[int, HeckeCoefficients] = {}


def delta_coefficients(n_max: int) -> HeckeCoefficients:
    """Normalized Delta eigenvalues lambda(n) = tau(n)/n^(11/2)."""
    for size, coeffs in _delta_cache.items():
        if size >= n_max:
            return HeckeCoefficients(coeffs.form, coeffs.lam[: n_max + 1], coeffs.raw[: n_max + 1])
    raw = tuple(tau_table(n_max))
    n = np.arange(n_max + 1, dtype=float)
    lam = np.zeros(n_max + 1)
    lam[1:] = np.array([float(v) for v in raw[1:]]) / n[1:] ** 5.5
    lam.setflags(write=False)
    coeffs = HeckeCoefficients(DELTA, lam, raw)
    _delta_cache.clear()
    _delta_cache[n_max] = coeffs
    return coeffs


def normalized_lambda(coeffs: HeckeCoefficients, n: int):
    if not 1 <= n <= coeffs.n_max:
        raise PreconditionError(f"n={n} outside 1..{coeffs.n_max}")
    return coeffs.lam[n]


def _parse_number(token: str, line_no: int):
    for conv in (int, float, complex):
        try:
            return conv(token)
        except ValueError:
            continue
    raise ParseError(f"cannot parse coefficient {token!r}", line_no)


def load_coefficients(path, check_pairs: int = 100, seed: int = 0) -> HeckeCoefficients:
    """Read a coefficient file of lines ``n a_n`` with ``# key value`` headers.

    Recognized header keys: weight, level, label, root_number.  The raw a_n
    are normalized by n^((k-1)/2).
    """
    text = Path(path).read_bytes().decode("ascii")
    header: dict[str, str] = {}
    values = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split(None, 1)
            if len(parts) == 2:
                header[parts[0].lower()] = parts[1].strip()
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'n a_n', got {line!r}", line_no)
        try:
            n = int(parts[0])
        except ValueError:
            raise ParseError(f"bad index {parts[0]!r}", line_no) from None
        if n != len(values) + 1:
            raise FormatError(f"line {line_no}: index {n} breaks the contiguous sequence (expected {len(values) + 1})")
        values.append(_parse_number(parts[1], line_no))
    if not values:
        raise FormatError("coefficient file contains no data")
    try:
        weight = int(header.get("weight", "12"))
        level = int(header.get("level", "1"))
        root = complex(header.get("root_number", "1"))
    except ValueError as exc:
        raise FormatError(f"bad header value: {exc}") from None
    form = ModularFormSpec(weight, level, None, root, header.get("label", Path(path).stem))

    raw = np.array(values)
    is_complex = np.iscomplexobj(raw)
    lam = np.zeros(len(values) + 1, dtype=complex if is_complex else float)
    n = np.arange(1, len(values) + 1, dtype=float)
    lam[1:] = raw / n ** ((weight - 1) / 2)
    if abs(lam[1] - 1) > 1e-12:
        raise InvariantError(f"lambda(1) = {lam[1]} but a normalized eigenform has lambda(1) = 1")
    raw_exact = (0, *values) if all(isinstance(v, int) for v in values) else None  # raw[n] = a_n, like lam
    coeffs = HeckeCoefficients(form, lam, raw_exact)
    bad = multiplicativity_spot_check(coeffs, check_pairs, seed)
    if bad:
        warnings.warn(f"{len(bad)} of {check_pairs} coprime pairs violate multiplicativity, e.g. {bad[0]}", stacklevel=2)
    return coeffs


def multiplicativity_spot_check(coeffs: HeckeCoefficients, pairs: int = 100, seed: int = 0, tol: float = 1e-10):
    """Random coprime (m, n) with mn <= n_max where lambda(mn) != lambda(m)lambda(n)."""
    rng = random.Random(seed)
    lam, top = coeffs.lam, coeffs.n_max
    bad = []
    if top < 6:
        return bad
    tried = 0
    while tried < pairs:
        m = rng.randint(2, max(2, math.isqrt(top)))
        n = rng.randint(2, top // m)
        if math.gcd(m, n) != 1 or math.gcd(m * n, coeffs.form.level) != 1:
            continue
        tried += 1
        if abs(lam[m * n] - lam[m] * lam[n]) > tol * max(1.0, abs(lam[m * n])):
            bad.append((m, n))
    return bad


def rp_average_check(coeffs: HeckeCoefficients, x: int) -> float:
    """(1/x) sum_{n <= x} |lambda(n)|^2."""
    if not 1 <= x <= coeffs.n_max:
        raise PreconditionError(f"x={x} outside 1..{coeffs.n_max}")
    block = np.abs(coeffs.lam[1 : x + 1]) ** 2
    return math.fsum(block) / x


def deligne_violations(coeffs: HeckeCoefficients, n_max: int, slack: float = 1e-12) -> list[int]:
    """All n <= n_max with |lambda(n)| > d(n)."""
    d = divisor_count_table(n_max)
    excess = np.abs(coeffs.lam[1 : n_max + 1]) - d[1:] * (1 + slack)
    return [int(n) + 1 for n in np.nonzero(excess > 0)[0]]


def hecke_violations(coeffs: HeckeCoefficients, n_max: int, tol: float = 1e-10) -> list[tuple[int, str]]:
    """Check the level-1 Hecke relations for every n <= n_max.

    Prime powers: lambda(p^(j+1)) = lambda(p) lambda(p^j) - lambda(p^(j-1)).
    Composites: lambda(n) = prod lambda(p^e).  Exact integer arithmetic is
    used when raw coefficients are present (weight k, a(p^2) = a(p)^2 - p^(k-1)).
    """
    if coeffs.form.level != 1:
        raise PreconditionError("Hecke relations are checked only for level 1")
    k = coeffs.form.weight
    raw, lam = coeffs.raw, coeffs.lam
    bad = []
    for n in range(2, n_max + 1):
        fac = factorize(n)
        if len(fac) == 1:
            (p, e), = fac.items()
            if e == 1:
                continue
            lo, mid = p ** (e - 2), p ** (e - 1)
            if raw is not None:
                ok = raw[n] == raw[p] * raw[mid] - p ** (k - 1) * raw[lo]
            else:
                ok = abs(lam[n] - (lam[p] * lam[mid] - lam[lo])) <= tol
            if not ok:
                bad.append((n, "prime-power recursion"))
        else:
            parts = [q**e for q, e in fac.items()]
            if raw is not None:
                ok = raw[n] == math.prod(raw[m] for m in parts)
            else:
                ok = abs(lam[n] - np.prod([lam[m] for m in parts])) <= tol * max(1.0, abs(lam[n]))
            if not ok:
                bad.append((n, "multiplicativity"))
    return bad
