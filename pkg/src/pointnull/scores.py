"""Scoring-rule alternatives to the Bayes factor.

Prior predictive densities for the point null, the conjugate alternative,
and the improper flat alternative; the log score whose pairwise difference
is exactly the log Bayes factor; the Hyvarinen score, which depends only on
derivatives of the log density and so survives the arbitrary constant of an
improper prior; and the posterior-expected Kullback-Leibler score. Every
rule is reported as a penalty: smaller is better, negative difference
s0 - s1 selects the null, and the zero boundary is reported as a tie rather
than broken by fiat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from .normal import AlternativePrior, NormalProblem, conjugate_posterior
from .numerics import RngStream, log_normal_pdf

__all__ = [
    "PredictiveDensity",
    "ScoreReport",
    "ScoreSelectionSummary",
    "hyvarinen_compare",
    "hyvarinen_score",
    "log_score",
    "log_score_compare",
    "score_consistency_sim",
    "sprenger_kl_report",
    "sprenger_kl_score",
]

_KINDS = ("point-null", "conjugate", "improper-flat")


@dataclass(frozen=True)
class PredictiveDensity:
    """Prior predictive for the sample mean under one hypothesis.

    Finite kinds are normal with a location and variance; improper-flat is
    the constant density c that a flat prior with arbitrary multiplier c
    induces on the sample mean. c also acts as a plain multiplier on the
    finite kinds so that scale invariance of a rule is a testable statement,
    not a vacuous one.
    """

    kind: str
    location: float | None = None
    variance: float | None = None
    c: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if not (math.isfinite(self.c) and self.c > 0.0):
            raise ValueError("c must be positive and finite")
        if self.kind == "improper-flat":
            if self.location is not None or self.variance is not None:
                raise ValueError("improper-flat carries no location or variance")
        else:
            if self.location is None or self.variance is None:
                raise ValueError(f"{self.kind} needs a location and a variance")
            if not (math.isfinite(self.variance) and self.variance > 0.0):
                raise ValueError("variance must be positive and finite")

    @classmethod
    def point_null(cls, problem: NormalProblem) -> "PredictiveDensity":
        """Sampling density of the mean with theta pinned at theta0."""
        return cls(kind="point-null", location=problem.theta0, variance=problem.sampling_var)

    @classmethod
    def conjugate(cls, problem: NormalProblem, prior: AlternativePrior) -> "PredictiveDensity":
        """Marginal density of the mean under the conjugate alternative."""
        if not prior.is_conjugate:
            raise ValueError("conjugate predictive needs a conjugate prior")
        return cls(
            kind="conjugate",
            location=problem.theta0,
            variance=problem.sampling_var + prior.tau * prior.tau,
        )

    @classmethod
    def improper_flat(cls, c: float = 1.0) -> "PredictiveDensity":
        """Constant density c induced by the flat prior with multiplier c."""
        return cls(kind="improper-flat", c=c)

    @classmethod
    def from_prior(cls, problem: NormalProblem, prior: AlternativePrior) -> "PredictiveDensity":
        if prior.is_conjugate:
            return cls.conjugate(problem, prior)
        return cls.improper_flat(c=prior.c)

    def scaled(self, k: float) -> "PredictiveDensity":
        """The same shape with density multiplied by k > 0."""
        if not (math.isfinite(k) and k > 0.0):
            raise ValueError("scale factor must be positive and finite")
        return replace(self, c=self.c * k)

    def log_density(self, x: float) -> float:
        if self.kind == "improper-flat":
            return math.log(self.c)
        base = log_normal_pdf(x, self.location, self.variance)
        return base if self.c == 1.0 else base + math.log(self.c)

    def density(self, x: float) -> float:
        return math.exp(self.log_density(x))

    @property
    def c_dependent(self) -> bool:
        """Whether log-score output moves with the arbitrary constant c."""
        return self.kind == "improper-flat"


@dataclass(frozen=True)
class ScoreReport:
    """Two penalties and their difference under one rule.

    Penalty convention throughout: smaller is better, so diff = s0 - s1 < 0
    selects the null and diff = 0 is a tie. The gain form of the log score
    is the negation; the sign bridge lives here and nowhere else.
    c_dependent warns that the numbers move with an improper prior's
    arbitrary constant.
    """

    rule: str
    s0: float
    s1: float
    diff: float
    select_null: bool
    tie: bool = False
    c_dependent: bool = False

    def __post_init__(self) -> None:
        if self.diff != self.s0 - self.s1:
            raise ValueError("diff must equal s0 - s1")
        if self.tie != (self.diff == 0.0):
            raise ValueError("tie must mark exactly the diff = 0 boundary")
        if self.select_null != (self.diff < 0.0):
            raise ValueError("select_null must mean diff < 0")

    @property
    def selection(self) -> str:
        if self.tie:
            return "tie"
        return "H0" if self.select_null else "H1"


def _report(rule: str, s0: float, s1: float, c_dependent: bool = False) -> ScoreReport:
    diff = s0 - s1
    return ScoreReport(
        rule=rule,
        s0=s0,
        s1=s1,
        diff=diff,
        select_null=diff < 0.0,
        tie=diff == 0.0,
        c_dependent=c_dependent,
    )


def log_score(x: float, m: PredictiveDensity) -> float:
    """Penalty -log m(x). Depends on c when m is improper-flat."""
    return -m.log_density(x)


def log_score_compare(problem: NormalProblem, prior: AlternativePrior) -> ScoreReport:
    """Log-score penalties of null and alternative at the observed mean.

    diff equals -log B01 exactly: the rule reproduces Bayes-factor selection
    for finite predictives, and inherits the arbitrary-constant defect
    against the improper flat alternative, where B01 itself is m0 / c.
    """
    m0 = PredictiveDensity.point_null(problem)
    m1 = PredictiveDensity.from_prior(problem, prior)
    return _report(
        "log",
        log_score(problem.xbar, m0),
        log_score(problem.xbar, m1),
        c_dependent=m1.c_dependent,
    )


def hyvarinen_score(x: float, m: PredictiveDensity) -> float:
    """Penalty 2 (log m)''(x) + ((log m)'(x))^2.

    Built from derivatives of log m, so any positive multiple of m scores
    identically; the improper flat predictive scores exactly zero no matter
    its constant. For a normal predictive the value is -2/v + (x - mu)^2/v^2.
    """
    if m.kind == "improper-flat":
        return 0.0
    d = x - m.location
    v = m.variance
    return -2.0 / v + (d * d) / (v * v)


def hyvarinen_compare(problem: NormalProblem, prior: AlternativePrior) -> ScoreReport:
    """Hyvarinen penalties of null and alternative at the observed mean.

    Against the flat alternative the difference collapses to
    (n/sigma^2) (t^2 - 2): an emergent selection boundary at |t| = sqrt(2),
    reported as-is. The magnitude carries no absolute calibration, so no
    acceptance bound is applied here.
    """
    m0 = PredictiveDensity.point_null(problem)
    m1 = PredictiveDensity.from_prior(problem, prior)
    return _report(
        "hyvarinen",
        hyvarinen_score(problem.xbar, m0),
        hyvarinen_score(problem.xbar, m1),
    )


def sprenger_kl_score(problem: NormalProblem, prior: AlternativePrior) -> float:
    """Posterior-expected KL divergence of the null from a size-n replicate.

    n (omega^2 + (mu_n - theta0)^2) / (2 sigma^2) with the conjugate
    posterior mean mu_n and variance omega^2. Nonnegative, approaching zero
    only as tau collapses the posterior onto theta0. The replication unit is
    a full sample of n; divide by n for the single-observation reading.
    """
    if not prior.is_conjugate:
        raise ValueError("posterior-expected KL score needs a conjugate prior")
    mu_n, omega2 = conjugate_posterior(problem, prior)
    d = mu_n - problem.theta0
    return problem.n * (omega2 + d * d) / (2.0 * problem.sigma * problem.sigma)


def sprenger_kl_report(problem: NormalProblem, prior: AlternativePrior) -> ScoreReport:
    """The KL score framed as the null's penalty against a zero baseline.

    There is no second predictive here: the score already measures the
    information lost by acting as if theta0 held, so s1 = 0 and any positive
    value nominally points away from the null. Where to draw the acceptance
    bound is exactly the calibration the rule does not supply.
    """
    return _report("sprenger-kl", sprenger_kl_score(problem, prior), 0.0)


@dataclass(frozen=True)
class ScoreSelectionSummary:
    """Selection rates for one sample size of a scored simulation sweep."""

    n: int
    select_null_rate: float
    select_alt_rate: float
    tie_rate: float


def score_consistency_sim(
    run,
    rule: str = "hyvarinen",
    prior: AlternativePrior | None = None,
) -> list[ScoreSelectionSummary]:
    """Selection rates of a scoring rule across a seeded simulation sweep.

    Accepts the same run description as the Bayes-factor consistency sweep
    and reuses its stream-per-grid-point layout, so the two simulations see
    identical draws for the same seed. Under the null with the flat
    alternative the null-selection rate sits on the intrinsic plateau
    P(chi-square_1 < 2) = 0.8427: the |t| = sqrt(2) boundary does not
    sharpen with n. Off the null the alternative takes over completely.
    """
    if rule != "hyvarinen":
        raise ValueError(f"unsupported rule {rule!r}; only 'hyvarinen' simulates")
    if prior is None:
        prior = AlternativePrior.flat()
    summaries = []
    for i, n in enumerate(run.n_grid):
        stream = RngStream(run.seed, stream_id=i)
        sem = run.sigma / math.sqrt(n)
        null = ties = 0
        for z in stream.normals(run.replications):
            problem = NormalProblem(
                theta0=run.theta0, sigma=run.sigma, n=n, xbar=run.theta_true + sem * float(z)
            )
            report = hyvarinen_compare(problem, prior)
            if report.tie:
                ties += 1
            elif report.select_null:
                null += 1
        reps = run.replications
        summaries.append(
            ScoreSelectionSummary(
                n=n,
                select_null_rate=null / reps,
                select_alt_rate=(reps - null - ties) / reps,
                tie_rate=ties / reps,
            )
        )
    return summaries
