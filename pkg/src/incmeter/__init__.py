"""Inconsistency measures for relational databases with denial constraints."""

from .datasets import collapse_example, load_mealticket, mealticket_manifest
from .dsl import (Comparison, Const, ConstraintSet, DenialConstraint, RelationAtom, Var,
                  desugar_fd, desugar_nd, parse_constraints, pretty_print)
from .errors import (ConstraintError, ConstraintSyntaxError, DataError, IncmeterError,
                     OracleBoundError)
from .files import Manifest, load_manifest, parse_schema
from .grounding import (ConflictHypergraph, GroundViolation, TupleClassification,
                        classify_tuples, conflict_hypergraph, ground_constraint, is_consistent)
from .hypergraph import (Hypergraph, maximal_consistent_subsets, min_cover_by_sets,
                         min_hitting_set, min_hitting_set_size, minimal_transversals)
from .lp import Infeasible, LinearProgram, Unbounded, eta_db, eta_prop, simplex_max
from .measures import (ALL_MEASURES, DB_MEASURES, PROP_MEASURES, MeasureId, MeasureReport,
                       db_measure, measure_all, prop_measure)
from .model import (INF, Database, MeasureValue, Schema, TupleId, Value, compare,
                    load_database, make_value, project)
from .transform import (PropKB, delete_constraint, delete_tuple, mi_of_kb, transform,
                        union_transform)

__version__ = "0.1.0"
