"""Decide implications between matrix properties of finitely complete
(pointed) categories, extract partial-term certificates from positive
decisions, and re-verify them in free finite partial algebras."""

from .errors import (MatrixSyntaxError, PointednessError, RelationSyntaxError,
                     ResourceLimitError, TermSyntaxError)
from .matrices import (STAR, Column, ExtendedMatrix, MatrixSet, builtin_matrix,
                       builtin_names, format_matrix, is_anti_trivial,
                       matrix_set, parse_matrix)
from .terms import (App, Term, Var, Zero, ZERO, format_term, format_term_shared,
                    parse_term, substitute_ops, substitute_vars, term_vars,
                    tree_size, validate_term)
from .algebras import (Conflict, Consistent, Demand, FinitePartialAlgebra,
                       InducedSignature, eval_term, eval_term_traced,
                       forced_instances, free_algebra, index_tuple,
                       is_closed_homomorphism, is_closed_subset, power,
                       product, restrict, row_equation,
                       satisfies_existence_eq, satisfies_matrix_equations,
                       tuple_index)
from .engine import (DecisionReport, DerivationTableau, Derived, OriginalLeft,
                     Provenance, StarColumn, decide, is_trivial_matrix,
                     is_trivial_set, saturate, seed_tableau)
from .certificates import (Certificate, CheckOutcome, check_certificate,
                           checking_algebra, extract_term, search_term)
from .relations import (FinitePointedSet, FiniteRelation,
                        closed_subsets_are_S_closed, is_M_closed_relation,
                        is_difunctional, is_strictly_M_closed_relation)
from .report import pairwise_decisions, poset_structure, write_report
from .cli import run

__all__ = [name for name in dir() if not name.startswith("_")]
