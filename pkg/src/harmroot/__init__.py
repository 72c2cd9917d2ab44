"""Newton and Halley iterations for analytic and harmonic maps, with the
classical and harmonic (pre-)Schwarzian derivatives they are tied to."""

__version__ = "0.1.0"

from .errors import (BranchPointError, DegenerateDenominator, DegenerateJacobian,
                     DivisionByZeroJet, IllConditionedFit, NotAZero, NotLocallyUnivalent,
                     NumericalError, ParseError)
from .expr import Z, AnalyticFn, compose, const, cos, eval_jet, exp, log, sin
from .harmonic import HarmonicMap, Orientation, conjugate_map, eval_map, map_jets, orientation
from .iteration import (IterationOptions, IterationStatus, StepKind, Window, estimate_order,
                        find_zeros, halley_step, harmonic_halley_step, harmonic_newton_step,
                        iterate, newton_step)
from .jets import Jet3
from .numdiff import (operators_crosscheck, verify_halley_identities, verify_newton_identities,
                      wirtinger_fit)
from .parser import parse_complex, parse_expression
from .schwarzian import (MobiusTransform, harmonic_pre_schwarzian, harmonic_schwarzian,
                         mobius_post_compose, pre_schwarzian, schwarzian)
