"""Exact nonsimplicity certificates for universal C*-algebras with phase-twisted monomial relations."""

from .certify import (Certificate, TorusVerdict, Unknown, Validation, certify_nonsimple_general,
                      certify_nonsimple_power, certify_torus, certify_via_power_quotient,
                      certify_via_quotient, recognize_power_presentation, solve_root_system,
                      torus_simplicity, validate_certificate)
from .errors import InputError, ParseError, PreconditionViolated, RepresentationError
from .lattice import IntMatrix, nondegeneracy_check, smith_normal_form
from .phase import Phase, PhaseMatrix, parse_phase, parse_phm, phase_add, phase_roots, phase_scale
from .represent import (MonomialMatrix, PowerWitness, build_monomial_rep, check_power_witness,
                        monomial_apply_word, verify_relations)
from .rewrite import (Derivation, check_torus_relation, detect_scalar_conflict, implies_bounded,
                      replay_derivation, torus_normal_form)
from .words import (Generator, OpClass, PhasedWord, Presentation, Relation, Word,
                    make_power_presentation, make_torus_presentation, parse_presentation)

__version__ = "0.1.0"
