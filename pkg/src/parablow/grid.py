"""Uniform periodic grid on [-pi, pi) with Fourier collocation operators."""
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.fft import irfft, rfft

from ._validation import check_field, check_order

DEALIAS_MODES = ("truncate", "pad")


class Norms(NamedTuple):
    l1: float
    l2: float
    linf: float
    lp: float


@dataclass(frozen=True, eq=False)
class PeriodicGrid:
    """Fourier collocation grid with nodes x_j = -pi + j*2*pi/n.

    The node x = 0 sits at index n//2, so reflection is the index map
    j -> (n - j) mod n.

    ``dealias`` selects how nonlinear products are filtered: ``"truncate"``
    zeroes the upper third of the spectrum after the product (2/3 rule),
    ``"pad"`` evaluates products on a 3/2 zero-padded grid.
    """

    n: int
    dealias: str = "truncate"
    x: np.ndarray = field(init=False, repr=False)
    k: np.ndarray = field(init=False, repr=False)
    mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.n
        if not isinstance(n, (int, np.integer)) or n < 16 or n % 2:
            raise ValueError(f"n must be an even integer >= 16, got {n!r}")
        if self.dealias not in DEALIAS_MODES:
            raise ValueError(f"dealias must be one of {DEALIAS_MODES}, got {self.dealias!r}")
        object.__setattr__(self, "n", int(n))
        x = -np.pi + np.arange(n) * (2.0 * np.pi / n)
        x[n // 2] = 0.0
        k = np.arange(n // 2 + 1, dtype=np.float64)
        if self.dealias == "truncate":
            mask = (k < n / 3.0).astype(np.float64)
        else:
            mask = (k < n // 2).astype(np.float64)
        for arr in (x, k, mask):
            arr.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "_trace_weights", self._build_trace_weights())
        object.__setattr__(self, "_reflect", (-np.arange(n)) % n)
        m = 3 * n // 2 if self.dealias == "pad" else n
        object.__setattr__(self, "n_quad", m)

    @property
    def spacing(self):
        return 2.0 * np.pi / self.n

    dx = spacing

    @property
    def k_cut(self):
        """Largest wavenumber that survives the product filter."""
        return int(np.max(self.k[self.mask > 0]))

    # spectral helpers -------------------------------------------------

    def to_spectral(self, f):
        return rfft(f, axis=-1)

    def from_spectral(self, fh):
        return irfft(fh, n=self.n, axis=-1)

    def derivative_symbol(self, order):
        """(ik)^order, with the Nyquist entry zeroed for odd orders."""
        sym = (1j * self.k) ** order
        if order % 2:
            sym = sym.copy()
            sym[-1] = 0.0
        return sym

    def synthesize(self, fh):
        """Spectral coefficients -> samples on the product (quadrature) grid."""
        if self.dealias == "truncate":
            return irfft(fh, n=self.n, axis=-1)
        m = self.n_quad
        shape = fh.shape[:-1] + (m // 2 + 1,)
        padded = np.zeros(shape, dtype=np.complex128)
        padded[..., : self.n // 2] = fh[..., : self.n // 2]
        return irfft(padded, n=m, axis=-1) * (m / self.n)

    def analyze(self, rows):
        """Samples on the product grid -> filtered spectral coefficients."""
        if self.dealias == "truncate":
            return rfft(rows, axis=-1) * self.mask
        out = rfft(rows, axis=-1)[..., : self.n // 2 + 1] * (self.n / self.n_quad)
        out[..., -1] = 0.0
        return out

    # public operators -------------------------------------------------

    def differentiate(self, f, order=1):
        order = check_order(order, {1, 2, 3, 4})
        f = check_field(f, self.n, "field")
        return irfft(self.derivative_symbol(order) * rfft(f), n=self.n)

    def multiply_dealiased(self, a, b):
        a = check_field(a, self.n, "a")
        b = check_field(b, self.n, "b")
        if self.dealias == "truncate":
            return irfft(rfft(a * b) * self.mask, n=self.n)
        ab = self.synthesize(rfft(np.stack([a, b])))
        return self.from_spectral(self.analyze(ab[0] * ab[1]))

    def filter(self, f):
        """Apply the product filter to a single field."""
        f = check_field(f, self.n, "field")
        return irfft(rfft(f) * self.mask, n=self.n)

    def integrate(self, f):
        f = check_field(f, self.n, "field")
        return float(np.sum(f) * self.spacing)

    def norms(self, f, p=2.0):
        f = np.abs(check_field(f, self.n, "field"))
        w = self.spacing
        if not np.isfinite(p):
            lp = float(np.max(f))
        else:
            lp = float((np.sum(f**p) * w) ** (1.0 / p))
        return Norms(
            l1=float(np.sum(f) * w),
            l2=float(np.sqrt(np.sum(f * f) * w)),
            linf=float(np.max(f)),
            lp=lp,
        )

    def reflect(self, f):
        """Return the samples of f(-x)."""
        return np.asarray(f)[..., self._reflect]

    def symmetry_errors(self, v, omega):
        v = check_field(v, self.n, "v")
        omega = check_field(omega, self.n, "omega")
        odd = float(np.max(np.abs(v + self.reflect(v))))
        even = float(np.max(np.abs(omega - self.reflect(omega))))
        return odd, even

    def _build_trace_weights(self):
        # f^(m)(0) = sum_k c_k (ik)^m e^{ik(0+pi)}/n, with c_k taken w.r.t. node j=0
        n = self.n
        mult = np.full(n // 2 + 1, 2.0)
        mult[0] = 1.0
        mult[-1] = 1.0
        sign = np.where(np.arange(n // 2 + 1) % 2, -1.0, 1.0)
        return np.stack(
            [self.derivative_symbol(m) * sign * mult / n for m in range(5)]
        )

    def trace_weights(self, order):
        return self._trace_weights[order]

    def trace_from_spectral(self, fh, order):
        """Order-th derivative at x = 0 from rfft coefficients."""
        return float(np.real(np.dot(self._trace_weights[order], fh)))

    def trace_at_zero(self, f, order=0):
        order = check_order(order, {0, 1, 2, 3})
        f = check_field(f, self.n, "field")
        if order == 0:
            return float(f[self.n // 2])
        return self.trace_from_spectral(rfft(f), order)

    def spectral_tail(self, f):
        """Energy fraction in the top decile of the resolved modes."""
        fh = rfft(check_field(f, self.n, "field"))
        return self.spectral_tail_from_spectral(fh)

    def spectral_tail_from_spectral(self, fh):
        energy = np.abs(fh) ** 2
        energy[1:] *= 2.0
        kc = self.k_cut
        top = self.k > 0.9 * kc
        top &= self.k <= kc
        total = float(np.sum(energy[1 : kc + 1]))
        if total <= 0.0:
            return 0.0
        return float(np.sum(energy[top]) / total)
