"""Distances, isosceles triples, bisectors and pinned trees in F_q^2."""
from .errors import *  # noqa: F401,F403
from .field import FieldCtx, make_field, quadratic_character, sqrt_field
from .plane import (LineF, LineMultiset, PointSet, bisector, circle_points, distance, incidences,
                    isotropic_directions)
from .stats import (bisector_energy, bisector_lines, distance_set, isosceles_triples, pinned_nonzero_distances,
                    sphere_histogram)
from .trees import (TreeSpec, count_distinct_pinned_trees, parse_tree_spec, path_tree, pinned_tree_lower_bound,
                    star_tree)
from .certify import CertifyParams, Certificate, certify_tree, check_certificate, popular_pins
from .audit import (AuditReport, audit_bisector_bound, audit_incidence_bound, audit_K_constant,
                    audit_M_condition, audit_triple_bound)
from .generate import GenSpec, SplitMix64, generate
from .experiment import ExperimentConfig, export, run_experiment

__version__ = "0.1.0"
