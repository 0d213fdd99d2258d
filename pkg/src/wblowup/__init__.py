"""Exact verification of the structure of weighted blowups.

The package presents the extended Rees algebra of a weighted centre,
computes truncated graded cohomology over chart covers with a
stabilization discipline (PASS / FAIL / INCONCLUSIVE), and verifies the
blockwise twist decomposition of the blowup: pushforward structure,
Hom-vanishing, exceptional triangles, and generation witnesses.
"""

__version__ = "0.1.0"

from .rings import (GradedRing, ParseError, Polynomial, Variable,
                    parse_polynomial, print_polynomial)
from .stab import (FAIL, INCONCLUSIVE, PASS, StabilizedDims, Truncation,
                   combine_verdicts, stabilize)
from .pieces import GradedPieceBasis, IdealComparison, graded_piece, ideal_equal_up_to_degree
from .complexes import (ChainMap, GradedComplex, HomologyTable, RegularityReport,
                        TwistedFreeModule, cone, hom_complex, homology,
                        koszul_complex, koszul_regularity_check,
                        single_module_complex, two_term_complex)
from .rees import (BlowupPresentation, ExceptionalDivisorPresentation,
                   PresentationCheck, ReesDegreeGenerators, WeightedCentre,
                   deformed_sequence, exceptional_divisor,
                   extended_rees_presentation, minimal_exponents, raw_sequence,
                   rees_generators, verify_presentation_against_rees)
from .cohomology import (CechCover, CohomologyTable, ModuleMapCheck, RouteAgreement,
                         blowup_cohomology_cech, blowup_cohomology_spectral,
                         cech_cohomology, cech_hypercohomology,
                         h0_structure_check, pushforward_structure_check,
                         residual_base, spectral_cech_agreement,
                         weighted_proj_cohomology_cech,
                         weighted_proj_cohomology_formula, weighted_proj_ring)
from .sod import (GenerationWitness, HomVanishingMatrix, SODReport, SupportCheck,
                  TriangleCheck, TwistBlock, beilinson_resolution,
                  blocks_for, blowup_generation_witness, deformed_regularity_check,
                  exceptional_triangle_check, generation_witness, hom_vanishing_matrix,
                  proj_generation_witness, regularity_gate,
                  resolution_support_check, sod_report, twist_window)

__all__ = [name for name in dir() if not name.startswith("_")]
