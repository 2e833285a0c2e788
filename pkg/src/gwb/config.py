import dataclasses
import logging
import os
from dataclasses import dataclass

log = logging.getLogger(__name__)

PRECISION_ENV_VAR = 'GWB_PRECISION'
DEFAULT_PRECISION = 64


@dataclass(frozen=True)
class Settings:
    """
    Every tunable constant of the workbench. Instances are immutable; use
    `replace()` to derive a variant.

    Keyword arguments:
    step_budget -- S-polynomial reductions allowed per Groebner computation.
    matrix_bound -- default entry bound for matrix enumeration.
    slicings -- random affine slicings tried when sampling a variety.
    starts -- random Newton starts per slicing.
    newton_iterations -- maximum Gauss-Newton iterations per solve.
    trust_radius -- cap on the norm of a single Newton step.
    continuation_steps -- parameter steps used to move theta(a) onto h.
    tol -- residual tolerance of numeric witnesses.
    rank_tol -- relative singular value cut-off for numerical rank.
    qmax -- denominator bound for blur-group exponents.
    eps -- approximation error allowed when rounding into H.
    precision -- decimal digits used by verification and relation search.
    threads -- worker threads for matrix enumeration.
    """
    step_budget: int = 10 ** 6
    matrix_bound: int = 2
    slicings: int = 16
    starts: int = 32
    newton_iterations: int = 60
    trust_radius: float = 0.5
    continuation_steps: int = 16
    tol: float = 1e-10
    rank_tol: float = 1e-8
    qmax: int = 50
    eps: float = 0.5
    precision: int = DEFAULT_PRECISION
    threads: int = 1

    @classmethod
    def from_env(cls, **overrides) -> 'Settings':
        """
        Builds settings from the environment. GWB_PRECISION sets the working
        precision in decimal digits; keyword arguments win over the
        environment.
        """
        values = {}
        raw = os.environ.get(PRECISION_ENV_VAR)
        if raw:
            try:
                values['precision'] = int(raw)
            except ValueError:
                log.warning(
                    f"Ignoring {PRECISION_ENV_VAR}={raw!r}; expecting an "
                    f"integer number of digits.")
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def replace(self, **changes) -> 'Settings':
        return dataclasses.replace(
            self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT_SETTINGS = Settings()
