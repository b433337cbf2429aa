"""Abstract numeration systems, substitutions, growth types and
syndeticity analysis."""

from .automata import (Dfa, StateMap, canonical_form, check_l_automaton,
                       complete, count_words, incidence_matrix, isomorphic,
                       minimize, product_l_automaton, trim)
from .gaps import (GapReport, KPrimeReport, ScalingFit, factor_gap_report,
                   gap_of_word, kprime_check, letter_gap_report,
                   max_uniform_block, scaling_fit)
from .growth import (AlgebraicRate, AutomatonGrowth, GrowthAnalysis,
                     GrowthType, associated_substitution_growth,
                     automaton_growth, compare_rates, growth_automaton,
                     image_lengths, lambda_coefficient, letter_growth,
                     rates_certified_equal, regularization_power,
                     substitution_growth)
from .independence import (IndependenceVerdict, SubstitutionIndependence,
                           classify_substitutions, independent_growth_types,
                           multiplicatively_independent,
                           substitutions_independent)
from .numeration import (AbstractNumerationSystem, RecognizableSet,
                         characteristic_stream, enumerate_words, rep, val)
from .periodicity import (CobhamReport, PeriodVerdict, Progressions,
                          cobham_check, detect_ultimate_period,
                          power_word_scan, progressions_of)
from .streams import SymbolStream, sliding_blocks
from .substitution import (Morphism, Substitution, block_substitution,
                           canonical_substitution, char_morphism,
                           eliminate_erasing, fixed_point, mortal_letters,
                           power, project, stabilization_power)

__version__ = "0.1.0"
