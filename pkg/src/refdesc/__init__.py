"""Toolkit for identifying references through graph descriptions.

Random graphs with ambiguous names, identifying-description
construction and decoding, information measures (ambiguity, salience,
shared salience), analytic description-size predictors, and a
reproducible experiment harness.
"""

from .errors import (BudgetExceeded, ConfigError, DuplicateArc, EmptyEnsemble,
                     EmptyInput, GraphTooLarge, InfeasibleBound, InvalidArc,
                     InvalidConfig, InvalidInput, NodeSetMismatch, NoNeighbors,
                     NotEnoughNodes, NoUniqueDescription, RefdescError,
                     UnboundDescriptor, UnknownName)
from .graph import (Graph, GraphStats, NameTable, build_graph, from_json_dict,
                    graph_stats, load_graph, lookup_name, save_graph,
                    to_json_dict)
from .generators import (GeneratorConfig, GraphKind, NamingConfig,
                         assign_names, generate_graph, realized_ambiguity)
from .measures import (AmbiguityReport, Ensemble, SalienceEstimate,
                       SharedSalienceReport, ambiguity_rate, build_ensemble,
                       description_salience, ensemble_salience_rate,
                       er_salience_rate, name_ambiguity, shape_of,
                       shared_salience)
from .descriptions import (ABSENT, DEEP, FLAT, INTERMEDIATE, RANDOM, SALIENT,
                           Description, ResolutionResult, construct_landmark,
                           construct_structural, decode, descriptor_pool,
                           find_shortest_unique, sample_candidate_description)
from .theory import (Prediction, PredictorInput, kanonymity_max_size,
                     min_required_salience, overhead_factor,
                     predict_description_size, self_describing_size,
                     shared_decode_bound, unique_probability)
from .harness import (AuditReport, ExperimentConfig, SweepRow,
                      brute_force_shortest, kanonymity_audit,
                      load_experiment_config, rows_to_csv, run_sweep,
                      write_csv)
from .rng import derive_seed, substream

__version__ = "0.1.0"
