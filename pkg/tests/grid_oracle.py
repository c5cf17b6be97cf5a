"""Independent FFT-on-a-grid implementations used as test oracles.

Fields are sampled on a uniform grid, derivatives and inertia operators are
applied with numpy FFTs, and integrals are grid means.  For trigonometric
polynomials of modest degree on a fine enough grid this is exact up to
round-off, and it shares no code with the package's coefficient algebra.
"""

import numpy as np


class CircleGrid:
    def __init__(self, symbol, M=256, L=1.0, mean_zero=False):
        self.M, self.L = M, L
        self.x = np.arange(M) * L / M
        self.k = 2 * np.pi * np.fft.fftfreq(M, d=L / M)
        self.A = np.array([symbol(abs(k)) for k in self.k], dtype=float)
        self.mean_zero = mean_zero

    def sample(self, p):
        return np.array([p(x) for x in self.x]) if callable(p) else np.asarray(p)

    def d(self, f, order=1):
        return np.fft.ifft((1j * self.k) ** order * np.fft.fft(f)).real

    def apply(self, f):
        return np.fft.ifft(self.A * np.fft.fft(f)).real

    def inv(self, f):
        F = np.fft.fft(f)
        with np.errstate(divide="ignore", invalid="ignore"):
            G = np.where(self.A != 0, F / np.where(self.A != 0, self.A, 1), 0)
        return np.fft.ifft(G).real

    def integral(self, f):
        return self.L * float(np.mean(f))

    def inner(self, u, v):
        return self.integral(self.apply(u) * v)

    def ad(self, u, v):
        return self.d(u) * v - u * self.d(v)

    def ad_star(self, v, u):
        m = self.apply(u)
        return self.inv(2 * m * self.d(v) + self.d(m) * v)

    def curvature(self, u, v):
        ad_uv = self.ad(u, v)
        s_vu, s_uv = self.ad_star(v, u), self.ad_star(u, v)
        tot = s_vu + s_uv
        mixed = self.inner(u, self.ad(v, ad_uv)) - self.inner(v, self.ad(u, ad_uv))
        return (0.25 * self.inner(tot, tot) - self.inner(self.ad_star(u, u), self.ad_star(v, v))
                - 0.75 * self.inner(ad_uv, ad_uv) + 0.5 * mixed)


class TorusGrid:
    """Scalar and vector fields on the unit-period 2-torus."""

    def __init__(self, M=64, L=(1.0, 1.0)):
        self.M = M
        self.L = L
        xs = np.arange(M) * L[0] / M
        ys = np.arange(M) * L[1] / M
        self.X, self.Y = np.meshgrid(xs, ys, indexing="ij")
        self.kx = 2 * np.pi * np.fft.fftfreq(M, d=L[0] / M)[:, None] * np.ones((1, M))
        self.ky = 2 * np.pi * np.fft.fftfreq(M, d=L[1] / M)[None, :] * np.ones((M, 1))
        self.area = L[0] * L[1]

    def points(self):
        return np.stack([self.X, self.Y], axis=-1)

    def dx(self, f):
        return np.fft.ifft2(1j * self.kx * np.fft.fft2(f)).real

    def dy(self, f):
        return np.fft.ifft2(1j * self.ky * np.fft.fft2(f)).real

    def integral(self, f):
        return self.area * float(np.mean(f))

    def multiplier(self, f, symbol, inverse=False):
        S = symbol(self.kx, self.ky)
        F = np.fft.fft2(f)
        if inverse:
            with np.errstate(divide="ignore", invalid="ignore"):
                G = np.where(S != 0, F / np.where(S != 0, S, 1), 0)
        else:
            G = S * F
        return np.fft.ifft2(G).real

    def poisson(self, f, g):
        return self.dx(f) * self.dy(g) - self.dy(f) * self.dx(g)

    def lambda_curvature(self, f, g, symbol):
        """Arnold's formula for stream functions with ``<f, g> = int f Lambda g``."""
        lam = lambda h: self.multiplier(h, symbol)  # noqa: E731
        inv = lambda h: self.multiplier(h, symbol, inverse=True)  # noqa: E731
        ip = lambda a, b: self.integral(lam(a) * b)  # noqa: E731
        ad = lambda a, b: -self.poisson(a, b)  # noqa: E731
        ads = lambda a, b: inv(self.poisson(a, lam(b)))  # noqa: E731
        ad_fg = ad(f, g)
        tot = ads(g, f) + ads(f, g)
        mixed = ip(f, ad(g, ad_fg)) - ip(g, ad(f, ad_fg))
        return (0.25 * ip(tot, tot) - ip(ads(f, f), ads(g, g)) - 0.75 * ip(ad_fg, ad_fg) + 0.5 * mixed)
