"""Surface-level pipeline: conformal factor -> Gauss curvature -> Cartan's r and s.

A chart carries the metric e^{2phi}|dz|^2 through the series w := e^{2phi}
rather than phi itself: phi(0) is typically irrational (e.g. (1/2) log 2 for
the rigid model surface), but every formula shipped here is "even" in
e^{phi}, i.e. uses only integer powers of w, so all coefficients stay in the
Gaussian rationals.  The log-derivative b = 2 D phi = Dw/w is the only other
chart datum the downstream formulas consume.

Covariant derivatives in the unitary coframe e^{phi} dz are applied letter by
letter; each letter lowers the exact order by one and contributes a factor
e^{-phi}, tracked as an integer exponent so odd-letter words are detected
instead of silently losing exactness.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Tuple

from .errors import (
    InsufficientOrderError,
    MalformedDefiningFunctionError,
    NotStrictlyPseudoconvexError,
    RepresentationError,
)
from .gaussrat import GaussianRational
from .series import (
    TruncatedSeries,
    log1p_series,
    reciprocal,
    sqrt_series,
)

CovariantWord = Tuple[str, ...]


class SurfaceChart:
    """Metric e^{2phi}|dz|^2 on a chart, stored as the real series w = e^{2phi}.

    The constant term of w must be a positive rational (strict pseudoconvexity
    of the associated CR structure at the chart center).
    """

    def __init__(self, e2phi: TruncatedSeries, provenance: str = "direct"):
        if not e2phi.real_flag:
            raise NotStrictlyPseudoconvexError("e^{2phi} must be a real series")
        c = e2phi.constant_term
        if c.im or c.re <= 0:
            raise NotStrictlyPseudoconvexError(
                f"e^{{2phi}} has non-positive value {c} at the chart center"
            )
        self.e2phi = e2phi
        self.provenance = provenance
        self._cache = {}

    @property
    def order(self) -> int:
        return self.e2phi.order

    def _cached(self, key, make):
        try:
            return self._cache[key]
        except KeyError:
            value = make()
            self._cache[key] = value
            return value

    @property
    def e2phi_inv(self) -> TruncatedSeries:
        return self._cached("e2phi_inv", lambda: reciprocal(self.e2phi))

    @property
    def b(self) -> TruncatedSeries:
        """b = 2 D phi = D(e^{2phi}) / e^{2phi}; exact order N - 1."""
        return self._cached(
            "b", lambda: self.e2phi.diff("z") * self.e2phi_inv.truncated(self.order - 1)
        )

    @property
    def bbar(self) -> TruncatedSeries:
        return self._cached("bbar", lambda: self.b.conjugate())

    def ephi(self) -> TruncatedSeries:
        """e^{phi} = sqrt(w); exists exactly only when w(0) is a rational square."""
        return self._cached("ephi", lambda: sqrt_series(self.e2phi))

    def ephi_inv(self) -> TruncatedSeries:
        return self._cached("ephi_inv", lambda: reciprocal(self.ephi()))

    def __repr__(self):
        return (
            f"SurfaceChart(order={self.order}, provenance={self.provenance!r}, "
            f"e2phi(0)={self.e2phi.constant_term})"
        )


def phi_from_line_bundle_metric(h: TruncatedSeries) -> SurfaceChart:
    """Chart of the circle bundle calibrated by a line-bundle metric h.

    Computes e^{2phi} = -D Dbar log h.  The additive constant log h(0) is
    killed by the mixed derivative, so only log(h/h(0)) is ever expanded and
    everything stays rational.
    """
    if not h.real_flag:
        raise NotStrictlyPseudoconvexError("h must be a real series")
    h0 = h.constant_term
    if h0.im or h0.re <= 0:
        raise NotStrictlyPseudoconvexError(
            f"h has non-positive value {h0} at the chart center"
        )
    if h.order < 4:
        raise InsufficientOrderError("line-bundle metric needs order >= 4")
    log_rel = log1p_series(h * (GaussianRational(1) / h0) - TruncatedSeries.constant(1, h.order))
    e2phi = -log_rel.diff("z").diff("zbar")
    c = e2phi.constant_term
    if c.im or c.re <= 0:
        raise NotStrictlyPseudoconvexError(
            f"-D Dbar log h = {c} at the center is not positive"
        )
    return SurfaceChart(e2phi, provenance="from_line_bundle_metric")


def phi_from_rigid_defining(F: TruncatedSeries) -> SurfaceChart:
    """Chart of the rigid hypersurface Im w = F(z, zbar).

    Requires F = z zbar + (total degree >= 4); the realization f = -i D F
    gives D fbar - Dbar f = 2i F_{z zbar}, i.e. e^{2phi} = 2 F_{z zbar}, with
    the factor 2 at the origin recorded in the provenance.
    """
    if not F.real_flag:
        raise MalformedDefiningFunctionError("F must be a real series")
    if F.coeff(1, 1) != GaussianRational(1):
        raise MalformedDefiningFunctionError("F must have z*zbar coefficient 1")
    for (k, l), c in F.coeffs.items():
        if (k, l) != (1, 1) and k + l < 4 and c:
            raise MalformedDefiningFunctionError(
                f"F has a forbidden low-degree term at {(k, l)}"
            )
    e2phi = F.diff("z").diff("zbar") * 2
    return SurfaceChart(e2phi, provenance="from_rigid_defining")


def gauss_curvature(chart: SurfaceChart) -> TruncatedSeries:
    """Gauss curvature K = -4 e^{-2phi} D Dbar phi, in the even form
    K = -2 (w * D Dbar w - Dw * Dbar w) / w^3; exact order N - 2."""

    def make():
        w = chart.e2phi
        dw = w.diff("z")
        dbw = w.diff("zbar")
        ddw = dw.diff("zbar")
        inv3 = (chart.e2phi_inv ** 3).truncated(chart.order - 2)
        return (w * ddw - dw * dbw) * inv3 * Fraction(-2)

    return chart._cached("K", make)


def covariant_derivative(
    f: TruncatedSeries, word: Iterable[str], chart: SurfaceChart
) -> TruncatedSeries:
    """Repeated covariant derivative of f in the unitary coframe e^{phi} dz.

    Each letter of the word ('z' or 'zbar') applies one step of the
    first-order recursion, starting from base bidegree (0, 0).  The running
    e^{-phi} factors are kept as an exponent; an odd letter count therefore
    needs e^{phi} itself, which only exists exactly when e^{2phi}(0) is a
    rational square.
    """
    word = tuple(word)
    if len(word) > f.order:
        raise InsufficientOrderError(
            f"word of length {len(word)} exceeds available order {f.order}"
        )
    S = f
    m = 0  # value = S * e^{m phi}
    k = l = 0
    for letter in word:
        n = S.order - 1
        if letter == "z":
            coef = Fraction(m + (l - k), 2)
            S = S.diff("z") + chart.b.truncated(n) * S.truncated(n) * coef
            k += 1
        elif letter in ("zbar", "zb"):
            coef = Fraction(m + (k - l), 2)
            S = S.diff("zbar") + chart.bbar.truncated(n) * S.truncated(n) * coef
            l += 1
        else:
            raise ValueError(f"unknown covariant letter {letter!r}")
        m -= 1
    if m % 2 == 0:
        power = (chart.e2phi_inv ** (-m // 2)).truncated(S.order)
        return S * power
    try:
        factor = (chart.ephi_inv() ** (-m)).truncated(S.order)
    except Exception as exc:
        raise RepresentationError(
            "odd-letter covariant word on a chart whose e^{phi} is irrational "
            "at the center; use even words or numeric mode"
        ) from exc
    return S * factor


def cartan_r(chart: SurfaceChart) -> TruncatedSeries:
    """Cartan's curvature function r, a third-order operator applied to bbar:
    r = (1/6)(Dbar^2 D bbar - 3 bbar D Dbar bbar + 2 bbar^2 D bbar
              - D bbar * Dbar bbar); exact order N - 4, always rational.

    Every term carries z-grade 2 on rotationally symmetric charts, which pins
    the placement of the derivatives in the cubic term."""

    def make():
        bb = chart.bbar
        d_bb = bb.diff("z")
        db_bb = bb.diff("zbar")
        t1 = d_bb.diff("zbar").diff("zbar")
        t2 = bb * d_bb.diff("zbar")
        t3 = bb * bb * d_bb
        t4 = d_bb * db_bb
        return (t1 - t2 * 3 + t3 * 2 - t4) * Fraction(1, 6)

    return chart._cached("r", make)


def cartan_s(chart: SurfaceChart) -> TruncatedSeries:
    """Fiber-stripped weight-3 representative s = D^2 r - 3 (Dr) b + r (2 b^2 - Db).

    Also computed through the divergence form
    s = e^{4phi} D(e^{-2phi} D(e^{-2phi} r)); the two must agree exactly and
    the agreement is asserted on every call path.
    """

    def make():
        r = cartan_r(chart)
        b = chart.b
        dr = r.diff("z")
        s_direct = (
            dr.diff("z")
            - dr * b * 3
            + r * (b * b * 2 - b.diff("z"))
        )
        w = chart.e2phi
        w_inv = chart.e2phi_inv
        inner = (w_inv * r).diff("z")
        s_div = (w * w) * ((w_inv * inner).diff("z"))
        assert s_direct == s_div.truncated(s_direct.order), (
            "divergence form of s disagrees with the direct formula"
        )
        return s_direct

    return chart._cached("s", make)


def qisgauss_residuals(chart: SurfaceChart):
    """Exact residuals of the two curvature identities
    12 r + e^{4phi} K_{;zbar zbar} and 12 s + e^{6phi} K_{;zbar zbar z z}."""
    w = chart.e2phi
    K = gauss_curvature(chart)
    K2 = covariant_derivative(K, ("zbar", "zbar"), chart)
    res1 = cartan_r(chart) * 12 + (w * w) * K2
    K4 = covariant_derivative(K, ("zbar", "zbar", "z", "z"), chart)
    res2 = cartan_s(chart) * 12 + (w * w * w) * K4
    return res1, res2


def divergence_form_residual(chart: SurfaceChart) -> TruncatedSeries:
    """s - e^{4phi} D(e^{-2phi} D(e^{-2phi} r)); identically zero."""
    s = cartan_s(chart)
    w = chart.e2phi
    w_inv = chart.e2phi_inv
    inner = (w_inv * cartan_r(chart)).diff("z")
    return s - (w * w) * (w_inv * inner).diff("z")
