"""Finite-space models of compact metric spaces: posets, cores, diameter posets and Cech homology."""
from .approximation import (DiameterPoset, EpsilonSchedule, FiniteApproximation, bonding_p, bonding_q,
                            build_diameter_poset, build_finite_approximation, epsilon_approximation,
                            is_epsilon_approximation, point_map, supported_elements, union_map)
from .complexes import SimplicialComplex, barycentric_subdivision, face_poset, order_complex
from .config import RunConfig, load_config
from .errors import (CapacityError, ClosureError, ConstructionError, FinShapeError, InputError,
                     NotMonotoneError, ScheduleError, TieWarning, VerificationFailure, WellDefinednessError)
from .generators import generate_circle, generate_interval, generate_sine_curve, sine_pipeline_space
from .homology import (HomologySequenceReport, betti, homology_sequence, induced_homology_map, poset_betti,
                       sequence_height)
from .homotopy import HomotopyResult, homotopic
from .metric import FiniteMetricSpace, Radius
from .poset import (CoreResult, FinitePoset, MonotoneMap, antichain, beat_points, chain, circle_model, constant,
                    core, down_set, hasse_export, height, identity, up_set, validate_monotone)
from .sequences import (InverseSequence, barycentric_tower, restrict_sequence, sequence_core,
                        verify_core_equivalence)

__version__ = "0.1.0"
