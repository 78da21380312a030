"""Wang shifts: fusion, markers, desubstitution, shear and 2-d morphisms."""
from ._kernels import USE_NUMBA
from .desubstitution import DesubResult, find_substitution
from .errors import WangError
from .markers import MarkerCandidate, find_markers, is_marker_subset
from .morphisms import (AnchoredWord, Morphism2D, apply, compose, compose_all,
                        generate_fixed_patch, incidence_matrix, is_primitive, perron_frequencies,
                        push_frequencies, quotient_morphism, square_fixed_seeds)
from .shear import ShearResult, SparsePatch, shear_tileset, unshear_patch
from .solver import (UNSAT, SolveInstance, count_solutions, dominoes_with_surrounding, export_cnf,
                     has_surrounding, iter_solutions, solve_external, solve_rectangle)
from .tiles import TileSet, WangTile, equivalent, fuse, to_transducer, transducer_product
from .words import Word2D, concat, factors, is_valid, occurs_at

__version__ = "0.1.0"
