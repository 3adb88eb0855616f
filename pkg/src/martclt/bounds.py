"""Right-hand sides of the Wasserstein convergence-rate bounds.

Every bound is a sum of nonnegative terms built from population quantities
of a model: the Orlicz Lyapunov coefficient L_phi = ||Y||_phi*phi^{-1}(n)/s_n,
power Lyapunov coefficients L_p = (sum_i E|Y_i|^p)^{1/p}/s_n, and norms
||V_n^2 - 1||_q of the total-conditional-variance deviation. All suppressed
multiplicative constants are set to 1, so values are meaningful up to a
constant and experiments assess slopes (decay rates), not levels.

Bound identifiers:

* ``thm21_i``   (W1)  L_phi*log(e + L_phi^{-2}) + ||V^2-1||_{1/2}^{1/2},
  for phi >= x^2.
* ``thm21_ii``  (W1)  p*L_phi + ||V^2-1||_{1/2}^{1/2}, for x^2 <= phi <= x^p.
* ``thm22_i``   (W2)  L_phi + ||V^2-1||_1^{1/2}, for phi <= x^3 with
  phi(sqrt(x)) convex.
* ``thm22_ii``  (W2)  L_phi + (||Y||_phi/s_n)*[n*G(phi^{-1}(n)^2)]^{1/4}
  + ||V^2-1||_1^{1/2}, for phi >= x^3, where G inverts x -> phi(x)/x.
  (For phi = x^p this middle factor is n^{1/4 + 1/(2p^2-2p)}.)
* ``thm23``     (W3)  L_3 + ||V^2-1||_{3/2}^{1/2}.
* ``cor33_i``   (W1/W2, V^2 = 1)  L_phi alone.
* ``cor33_ii``  (W1/W2, V^2 = 1, conditional sigmas bounded below by sigma)
  M_phi-based floor terms with M_phi = max_i E[phi(|Y_i|)].
* ``cor33_iii`` (W1/W2, V^2 = 1, bounded increments)  theta-based terms with
  theta = max_i ||Y_i||_inf.
* ``prior_*``   comparison evaluators: haeusler_joos, joos91, rollin, fanma,
  fansu.

Population expectations are exact: per-step marginal laws are finite
mixtures of Gaussians and discrete laws, so E[phi(|Y_i|/c)] reduces to
Gauss-Hermite quadrature plus finite sums, and the population Orlicz norm
is a bisection on the same decreasing objective as the empirical one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, DomainError
from .mds import ConditionalLaw, MdsModel, analytic_v_norm, marginal_step_groups
from .nfunc import NFunction, check_order, default_check_grid, g_inverse, inverse, \
    power, sqrt_arg_convex

BOUND_IDS = ("thm21_i", "thm21_ii", "thm22_i", "thm22_ii", "thm23",
             "cor33_i", "cor33_ii", "cor33_iii",
             "prior_haeusler_joos", "prior_joos91", "prior_rollin",
             "prior_fanma", "prior_fansu")

# Keys whose value lands in the CSV L_term column; "v" lands in v_term;
# anything else is an extra term.
_L_KEYS = ("L", "pL", "L_log", "L_pow", "M_log")

_NORM_REL_TOL = 1e-10


def _half_line_rule(panels: int = 8, order: int = 24, cutoff: float = 9.5):
    """Nodes/weights with E[f(|N|)] = sum w * f(x): panelled Gauss-Legendre
    on [0, cutoff]. The integrand is smooth there (no |x| kink), unlike a
    full-line Hermite rule; the tail beyond the cutoff is ~1e-21."""
    base_x, base_w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, cutoff, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * base_x[None, :]).ravel()
    w = (half[:, None] * base_w[None, :]).ravel()
    dens = 2.0 * np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    return x, w * dens


_GAUSS_NODES, _GAUSS_WEIGHTS = _half_line_rule()


def _gaussian_abs_moment(p: float) -> float:
    """E|N|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi)."""
    return 2.0 ** (p / 2.0) * math.gamma((p + 1.0) / 2.0) / math.sqrt(math.pi)


def law_phi_mean(law: ConditionalLaw, nf: NFunction, c: float) -> float:
    """E[phi(|Y|/c)] under a single closed-form law (may be +inf for
    exponential gauges at small c)."""
    if nf.kind == "power":
        # Exact absolute moments; avoids quadrature error from the |x|^p
        # kink at the origin.
        return law_abs_moment(law, nf.params[0]) / c ** nf.params[0]
    if law.form == "gaussian":
        v = law.variances[0]
        if v == 0.0:
            return 0.0
        vals = nf(_GAUSS_NODES * (math.sqrt(v) / c))
        return float(np.sum(vals * _GAUSS_WEIGHTS))
    if law.form == "discrete":
        return float(sum(pr * nf(abs(x) / c)
                         for pr, x in zip(law.probs, law.points)))
    return float(sum(w * law_phi_mean(ConditionalLaw.gaussian(v), nf, c)
                     for w, v in zip(law.weights, law.variances)))


def law_abs_moment(law: ConditionalLaw, p: float) -> float:
    """E|Y|^p under a single closed-form law."""
    if law.form == "gaussian":
        return law.variances[0] ** (p / 2.0) * _gaussian_abs_moment(p)
    if law.form == "discrete":
        return float(sum(pr * abs(x) ** p for pr, x in zip(law.probs, law.points)))
    return float(sum(w * v ** (p / 2.0) * _gaussian_abs_moment(p)
                     for w, v in zip(law.weights, law.variances)))


def _law_sup(law: ConditionalLaw) -> float:
    if law.form == "discrete":
        return max(abs(x) for x in law.points)
    variances = law.variances
    return 0.0 if max(variances) == 0.0 else math.inf


def _step_mean(groups, fn) -> list:
    """[(count, sum_j w_j * fn(law_j)), ...] over the compressed steps."""
    return [(count, sum(w * fn(law) for w, law in components))
            for count, components in groups]


def population_orlicz_norm(nf: NFunction, groups) -> float:
    """inf{c : (1/n) sum_i E[phi(|Y_i|/c)] <= 1} with exact expectations
    over the per-step marginal laws; same bisection as the empirical norm."""
    n = sum(count for count, _ in groups)
    mean_sq = sum(count * m for count, m in
                  _step_mean(groups, lambda law: law.variance)) / n

    def objective(c: float) -> float:
        total = 0.0
        for count, mean in _step_mean(
                groups, lambda law, c=c: law_phi_mean(law, nf, c)):
            total += count * mean
            if math.isinf(total):
                return math.inf
        return total / n

    if mean_sq == 0.0:
        return 0.0
    lo = hi = math.sqrt(mean_sq)
    for _ in range(300):
        if objective(hi) <= 1.0:
            break
        hi *= 2.0
    else:
        raise DomainError("population Orlicz objective never fell below 1")
    for _ in range(300):
        if objective(lo) > 1.0 or lo == 0.0:
            break
        lo /= 2.0
    if lo == hi or objective(lo) <= 1.0:
        return lo
    for _ in range(200):
        if hi - lo <= _NORM_REL_TOL * hi:
            break
        mid = 0.5 * (lo + hi)
        if objective(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return hi


class ModelAnalytics:
    """Cached population quantities of one model under one gauge.

    The gauge may be None for bounds phrased purely in power norms.
    """

    def __init__(self, model: MdsModel, nf: NFunction = None):
        self.model = model
        self.nf = nf
        self._groups = None
        self._cache = {}

    def groups(self):
        if self._groups is None:
            self._groups = marginal_step_groups(self.model)
        return self._groups

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def _require_nf(self) -> NFunction:
        if self.nf is None:
            raise ConfigError("this bound needs an N-function gauge")
        return self.nf

    def y_orlicz(self) -> float:
        nf = self._require_nf()
        return self._memo("y_orlicz",
                          lambda: population_orlicz_norm(nf, self.groups()))

    def lyap_orlicz(self) -> float:
        nf = self._require_nf()
        return self.y_orlicz() * inverse(nf, float(self.model.n)) / self.model.s_n

    def lyap_p(self, p: float) -> float:
        """L_p = (sum_i E|Y_i|^p)^{1/p} / s_n (un-averaged sum convention)."""
        def compute():
            total = sum(count * m for count, m in
                        _step_mean(self.groups(),
                                   lambda law: law_abs_moment(law, p)))
            return total ** (1.0 / p) / self.model.s_n
        return self._memo(("lyap_p", p), compute)

    def v_norm(self, q: float) -> float:
        return analytic_v_norm(self.model, q)

    def max_step_norm(self, p: float) -> float:
        """max_i ||Y_i||_p = max_i (E|Y_i|^p)^{1/p}."""
        return max(m for _, m in
                   _step_mean(self.groups(),
                              lambda law: law_abs_moment(law, p))) ** (1.0 / p)

    def max_sup(self) -> float:
        """max_i ||Y_i||_inf (inf when some step is Gaussian)."""
        worst = 0.0
        for _, components in self.groups():
            for w, law in components:
                if w > 0.0:
                    worst = max(worst, _law_sup(law))
        return worst

    def m_phi(self) -> float:
        """max_i E[phi(|Y_i|)]."""
        nf = self._require_nf()
        return max(m for _, m in
                   _step_mean(self.groups(),
                              lambda law: law_phi_mean(law, nf, 1.0)))

    def sigma_floor(self) -> float:
        return self.model.min_sigma()


@dataclass(frozen=True)
class BoundReport:
    """One evaluated right-hand side: named nonnegative terms, their sum,
    and a record of the inputs that produced them."""

    bound_id: str
    terms: dict
    value: float
    inputs_digest: dict

    def l_term(self) -> float:
        return float(sum(v for k, v in self.terms.items() if k in _L_KEYS))

    def v_term(self) -> float:
        return float(self.terms.get("v", 0.0))

    def extra_terms(self) -> float:
        return float(sum(v for k, v in self.terms.items()
                         if k not in _L_KEYS and k != "v"))


def v_term(sigma2_ensemble, s_n2: float, q: float) -> float:
    """Monte-Carlo ||V_n^2 - 1||_q^{1/2} from an R x n matrix of exact
    per-path conditional variances."""
    if not s_n2 > 0:
        raise DomainError("s_n2 must be positive")
    if not q > 0:
        raise DomainError("norm order q must be positive")
    sig = np.asarray(sigma2_ensemble, dtype=float)
    if sig.ndim != 2 or sig.size == 0:
        raise DataError("sigma2 ensemble must be a non-empty R x n matrix")
    v2 = np.add.accumulate(sig, axis=1)[:, -1] / s_n2
    return float(np.mean(np.abs(v2 - 1.0) ** q) ** (1.0 / (2.0 * q)))


def _require_order(lower: NFunction, upper: NFunction, description: str):
    if not check_order(lower, upper, default_check_grid()):
        raise DomainError(f"gauge ordering {description} fails on the check grid")


def _resolve_power_upper(nf: NFunction, p) -> float:
    if p is not None:
        return float(p)
    if nf.kind == "power":
        return nf.params[0]
    if nf.kind == "power_log":
        return 3.0  # x^2 log(1+x) <= x^3: the ratio x/log(1+x) increases
    raise DomainError(f"no polynomial upper bound known for {nf.label()}; pass p")


def _require_v2_equal_1(analytics: ModelAnalytics):
    if analytics.v_norm(1.0) != 0.0:
        raise DomainError("bound assumes V_n^2 = 1 almost surely; "
                          "this model's deviation norm is nonzero")


def _require_cor_hypotheses(nf: NFunction):
    _require_order(nf, power(3.0), "phi <= x^3")
    if not sqrt_arg_convex(nf):
        raise DomainError("gauge ordering phi(sqrt(x)) convex fails")


def evaluate_bound(bound_id: str, analytics: ModelAnalytics, *, family: int = 1,
                   p=None, q: float = 1.0, reps: int = 0, seed: int = 0) -> BoundReport:
    """Evaluate one bound's right-hand side with unit constants.

    ``family`` selects the distance order (1, 2, or 3) for the corollary
    cases whose formulas differ by order; theorem/prior identifiers carry
    their own order and ignore it.
    """
    if bound_id not in BOUND_IDS:
        raise ConfigError(f"unknown bound id {bound_id!r}")
    model, nf = analytics.model, analytics.nf
    n, s_n = model.n, model.s_n
    terms = {}

    if bound_id == "thm21_i":
        _require_order(power(2.0), analytics._require_nf(), "x^2 <= phi")
        lyap = analytics.lyap_orlicz()
        terms["L_log"] = lyap * math.log(math.e + lyap ** -2) if lyap > 0 else 0.0
        terms["v"] = analytics.v_norm(0.5) ** 0.5
    elif bound_id == "thm21_ii":
        nf = analytics._require_nf()
        pp = _resolve_power_upper(nf, p)
        if not pp > 2:
            raise DomainError("thm21_ii needs p > 2")
        _require_order(power(2.0), nf, "x^2 <= phi")
        _require_order(nf, power(pp), f"phi <= x^{pp}")
        terms["pL"] = pp * analytics.lyap_orlicz()
        terms["v"] = analytics.v_norm(0.5) ** 0.5
        p = pp
    elif bound_id == "thm22_i":
        nf = analytics._require_nf()
        _require_cor_hypotheses(nf)
        terms["L"] = analytics.lyap_orlicz()
        terms["v"] = analytics.v_norm(1.0) ** 0.5
    elif bound_id == "thm22_ii":
        nf = analytics._require_nf()
        _require_order(power(3.0), nf, "x^3 <= phi")
        terms["L"] = analytics.lyap_orlicz()
        inner = g_inverse(nf, inverse(nf, float(n)) ** 2)
        terms["g_term"] = (analytics.y_orlicz() / s_n) * (n * inner) ** 0.25
        terms["v"] = analytics.v_norm(1.0) ** 0.5
    elif bound_id == "thm23":
        terms["L"] = analytics.lyap_p(3.0)
        terms["v"] = analytics.v_norm(1.5) ** 0.5
    elif bound_id == "cor33_i":
        if family not in (1, 2):
            raise DomainError("cor33_i covers orders 1 and 2 only")
        _require_cor_hypotheses(analytics._require_nf())
        _require_v2_equal_1(analytics)
        terms["L"] = analytics.lyap_orlicz()
    elif bound_id == "cor33_ii":
        nf = analytics._require_nf()
        _require_cor_hypotheses(nf)
        _require_v2_equal_1(analytics)
        sigma = analytics.sigma_floor()
        if not sigma > 0:
            raise DomainError("cor33_ii needs conditional sigmas bounded "
                              "below by a positive sigma")
        m_phi = analytics.m_phi()
        if family == 1:
            if nf.kind != "power" or not 2.0 < nf.params[0] <= 3.0:
                raise DomainError("cor33_ii order-1 form needs phi = x^p "
                                  "with p in (2, 3]")
            pp = nf.params[0]
            if pp == 3.0:
                terms["floor_term"] = m_phi * math.log(n) / (sigma ** 2 * s_n)
            else:
                terms["floor_term"] = (m_phi * s_n ** 2 /
                                       ((3.0 - pp) * sigma ** 2 * nf(s_n)))
        elif family == 2:
            terms["floor_term"] = (math.sqrt(m_phi) * s_n /
                                   (sigma * math.sqrt(nf(s_n))))
        else:
            raise DomainError("cor33_ii covers orders 1 and 2 only")
    elif bound_id == "cor33_iii":
        _require_cor_hypotheses(analytics._require_nf())
        _require_v2_equal_1(analytics)
        theta = analytics.max_sup()
        if not math.isfinite(theta) or theta <= 0:
            raise DomainError("cor33_iii needs uniformly bounded increments")
        if family == 1:
            terms["theta_term"] = (theta / s_n) * math.log(math.e + s_n)
        elif family == 2:
            terms["theta_term"] = math.sqrt(theta / s_n)
        else:
            raise DomainError("cor33_iii covers orders 1 and 2 only")
    elif bound_id == "prior_haeusler_joos":
        if p is None:
            p = _resolve_power_upper(analytics._require_nf(), None)
        if not p > 2:
            raise DomainError("prior_haeusler_joos needs p > 2")
        if not q >= 1:
            raise DomainError("prior_haeusler_joos needs q >= 1")
        terms["L_pow"] = analytics.lyap_p(p) ** (p / (1.0 + p))
        terms["v"] = analytics.v_norm(q) ** (q / (2.0 * q + 1.0))
    elif bound_id == "prior_joos91":
        if not q >= 1:
            raise DomainError("prior_joos91 needs q >= 1")
        m = analytics.max_sup()
        if not math.isfinite(m) or m <= 0:
            raise DomainError("prior_joos91 needs uniformly bounded increments")
        terms["M_log"] = (m / s_n) * math.log(math.e + s_n ** 2 / m ** 2)
        terms["v"] = analytics.v_norm(q) ** (q / (2.0 * q + 1.0))
    elif bound_id == "prior_rollin":
        _require_v2_equal_1(analytics)
        terms["L"] = analytics.lyap_p(3.0)
    elif bound_id == "prior_fanma":
        if not q >= 1:
            raise DomainError("prior_fanma needs q >= 1")
        terms["L"] = analytics.lyap_p(3.0)
        terms["v"] = analytics.v_norm(q) ** 0.5
        terms["step_term"] = analytics.max_step_norm(2.0 * q) / s_n
    else:  # prior_fansu
        if p is None:
            p = _resolve_power_upper(analytics._require_nf(), None)
        if not 2.0 < p <= 3.0:
            raise DomainError("prior_fansu needs p in (2, 3]")
        _require_v2_equal_1(analytics)
        terms["L"] = analytics.lyap_p(p)

    digest = {"nfunc": nf.label() if nf is not None else "",
              "p": p, "q": q, "n": n, "s_n": s_n, "reps": reps, "seed": seed}
    return BoundReport(bound_id, terms, float(sum(terms.values())), digest)


def rhs_w1(bound_id: str, analytics: ModelAnalytics, **kwargs) -> BoundReport:
    """Order-1 bounds: the two general W1 theorems, the V^2 = 1 corollary
    cases, and the prior-work comparison bounds."""
    allowed = ("thm21_i", "thm21_ii", "cor33_i", "cor33_ii", "cor33_iii",
               "prior_haeusler_joos", "prior_joos91", "prior_rollin",
               "prior_fanma", "prior_fansu")
    if bound_id not in allowed:
        raise ConfigError(f"{bound_id!r} is not an order-1 bound")
    return evaluate_bound(bound_id, analytics, family=1, **kwargs)


def rhs_w2(bound_id: str, analytics: ModelAnalytics, **kwargs) -> BoundReport:
    """Order-2 bounds: the sub-cubic and super-cubic W2 theorems and the
    V^2 = 1 corollary cases."""
    allowed = ("thm22_i", "thm22_ii", "cor33_i", "cor33_ii", "cor33_iii")
    if bound_id not in allowed:
        raise ConfigError(f"{bound_id!r} is not an order-2 bound")
    return evaluate_bound(bound_id, analytics, family=2, **kwargs)


def rhs_w3(analytics: ModelAnalytics, **kwargs) -> BoundReport:
    """The order-3 bound L_3 + ||V^2-1||_{3/2}^{1/2}."""
    return evaluate_bound("thm23", analytics, family=3, **kwargs)


def bound_order(bound_id: str):
    """The intrinsic distance order of a bound id, or None when it follows
    the experiment's measured order (corollary cases)."""
    if bound_id.startswith("thm21") or bound_id.startswith("prior"):
        return 1
    if bound_id.startswith("thm22"):
        return 2
    if bound_id == "thm23":
        return 3
    return None
