"""Finite-propagation operators, translation systems, and spectral gaps over
families of finite metric spaces."""

from .errors import (BudgetExceeded, ConfigError, DimensionMismatch,
                     DisconnectedComponent, EmptyComponent, EmptySystem,
                     InvalidExponent, InvalidFiltration, NonSymmetricGenerators,
                     NotGenerating, NotPrime, OutOfRange, RoegapError,
                     SpaceMismatch, SupportNotCovered)
from .spaces import (Component, Entourage, NetExtraction, SpaceFamily, amplify,
                     build_space_from_edges, check_monogenic, compose_entourages,
                     extract_net, load_space, r_diagonal, save_space)
from .operators import (DiagonalFunction, FullTranslationSystem, PartialTranslation,
                        RoeOperator, apply_operator, l1_norm_upper, load_operator,
                        load_partial_translation, load_system, operator_to_pt,
                        pt_to_operator, row_sums, sample_partial_translation,
                        save_operator, save_partial_translation, save_system)
from .groups import (CayleyFamily, GroupSpec, GroupTable, box_space,
                     box_space_from_filtration, cayley_component, cyclic_group,
                     dihedral_family, dihedral_group, family_from_descriptor,
                     quotient_group, sl2_family, sl2_group, symmetric_family,
                     symmetric_group, torus_group)
from .decomposition import (MatchingCover, cayley_decompose, decompose,
                            entourage_matchings, full_system_from_matchings,
                            save_decomposition, verify_decomposition)
from .spectral import (AmplifiedCheck, ComponentReport, DecayResult, GapResult,
                       InvariantProjector, LpInterval, MarkovOperator,
                       ModulusFunction, ParameterBounds, SpectralReport, Verdict,
                       amplified_invariants_check, kazhdan_iterate, laplacian,
                       markov, modulus_lp, relate_parameters, restricted_gap_l2,
                       restricted_gap_lp, spectral_report, uniform_gap_verdict,
                       witness_check)
from .mazur import (C0Record, ConjugationCertificate, DecayVector,
                    SignedPermutationIsometry, almost_invariant_c0, c0_slope,
                    complex_sign, conjugate_isometry, lp_norm, mazur_map,
                    transfer_defect, transfer_series)
from .config import RunConfig

__version__ = "0.1.0"
