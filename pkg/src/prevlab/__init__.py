"""Exact finite-scale previsions, forks and powercones.

Everything is rational: valuations, step functions and LP certificates are
``fractions.Fraction`` values, and every solver answer is re-checked by
direct arithmetic before it is returned.
"""

from .errors import *  # noqa: F401,F403
from .lp import Infeasible, LinProg, LpSession, MixedStrategy, Optimal, Unbounded, backend, lp_solve, minimax, verify_minimax
from .order import (
    FinitePoset,
    StepFn,
    UpSet,
    antichain,
    build_poset,
    chain,
    chi,
    from_layers,
    is_monotone,
    layer_cake,
    random_monotone,
    restrict,
    upsets,
)
from .powercone import (
    FlavorViolation,
    GenSet,
    Inside,
    Outside,
    Shape,
    compare,
    egli_milner_semantic,
    grid_member,
    hoare_down,
    hull,
    is_member,
    lens,
    lens_roundtrip,
    member,
    minkowski,
    r_apply,
    s_apply,
    same_set,
    smyth_up,
    support,
    verify_certificate,
    verify_order_embedding,
    verify_rs_identity,
    verify_sr_hull,
)
from .prevision import (
    Fork,
    ForkPres,
    Kind,
    NotFork,
    NoWitness,
    PrevisionPres,
    check_flavor_semantic,
    eval_fork,
    eval_prev,
    sandwich_witness,
    walley_decide,
    walley_violation,
)
from .rational import format_rat, parse_rat
from .valuation import (
    Flavor,
    Valuation,
    edalat_lift,
    edalat_unlift,
    flavor_of,
    integrate,
    lift_poset,
    mass,
    riesz_roundtrip,
    stochastic_leq,
    stochastic_witness,
)

eval = eval_prev  # noqa: A001 - the natural name for applying a prevision

__version__ = "0.1.0"
