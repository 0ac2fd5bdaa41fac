"""Codensity liftings of set endofunctors along lattice-valued fibrations,
and the coinductive notions they induce on finite coalgebras: bisimilarity,
simulation preorders, behavioral pseudometrics, and observational topologies.
"""

from .bisim import (
    Coalgebra,
    CoalgebraMorphism,
    FixedPointTrace,
    check_stability,
    det_lts,
    dfa,
    gfp,
    indistinguishability,
    kripke,
    language_map,
    markov_chain,
    phi,
)
from .catalog import (
    CatalogEntry,
    entry_by_name,
    machine_family,
    standard_catalog,
    thr_family,
)
from .checkers import (
    CheckReport,
    check_cinjective,
    check_fibered,
    check_theorem_battery,
)
from .errors import InputError, NonConvergenceError, SizeCapError
from .fibration import (
    FiberElement,
    FiberOrderResult,
    Fibration,
    arrow_exists,
    is_cartesian,
)
from .functors import (
    DetLTS,
    ExpectedValue,
    Functor,
    IdentityFunctor,
    Machine,
    Powerset,
    Subdist,
)
from .instances import (
    BOT,
    TOP,
    TWO,
    EqRel,
    ERel,
    PMet,
    Pre,
    Top,
    eqrel,
    erel,
    fibration_by_name,
    omega_eqrel,
    omega_pmet,
    omega_pre,
    omega_sierpinski,
    pmet,
    pmet_dist,
    preorder,
    topology,
)
from .lifting import (
    EXHAUSTIVE,
    GRID,
    Lifting,
    LiftingParameter,
    codensity_lift,
    codensity_lift_multi,
    hom_set,
    lift_arrow,
)
from .sets import FinFun, FinSet, compose, enumerate_functions, identity

__version__ = "0.1.0"
