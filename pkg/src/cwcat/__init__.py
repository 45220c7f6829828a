"""Closed 1-forms on finite CW complexes: periods, covers, gradient-like flows,
homoclinic cycles and Lusternik-Schnirelmann type category certificates."""

from .cellcx import (Complex, Edge, Face, Path, SignedEdge, SpanningForest, betti1,
                     dump_complex, euler_characteristic, fundamental_cycles, load_complex,
                     spanning_forest, validate)
from .cocycle import (CellularMap, OneForm, PeriodData, VertexFunction, cohomology_basis, combine,
                      differential, integrate, is_closed, is_exact, load_form, periods, pullback,
                      realize_class, same_class)
from .cover import CoverPoint, deck_generator, lift_path, lift_step, potential
from .gradflow import Flow, build_flow, forced_fixed, omega_limit, orbit, validate_flow
from .homoclinic import connections, exit_directions, homoclinic_cycles, validate_star
from .lscat import (CatCertificate, FailureWitness, build_certificate, cat_upper,
                    scaling_transport, stabilization_bound, verify_certificate)

__version__ = "0.1.0"
