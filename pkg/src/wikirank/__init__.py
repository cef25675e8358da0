"""wikirank: hyperlink-network extraction, centrality scoring, noise
robustness and partial-order rank aggregation."""

from .centrality import (CentralityTable, PowerIterationError, average_score,
                         betweenness, closeness, compute_table,
                         degree_centrality, eigenvector, full_analysis,
                         pagerank, rescale)
from .extract import ExtractResult, build_network, extract_from_dirs
from .graph import (ComponentPartition, Graph, NetworkParameters,
                    ShortestPathData, clustering_coefficient,
                    connected_components, from_edge_list, network_parameters,
                    read_edge_list, single_source_shortest_paths,
                    write_edge_list)
from .noise import (BoxStats, DegreeTheory, NoiseConfig, NoiseEnsembleStats,
                    box_stats, degree_std_regression, degree_theory, rewire,
                    run_ensemble, sample_rng)
from .poset import (DominancePoset, HasseDag, build_poset, heights, top_nodes,
                    transitive_reduction)
from .ranking import (CorrelationMatrix, FitError, LogBinnedFit, RankVector,
                      UndefinedCorrelationError, correlation_matrix,
                      degree_distribution_fit, fit_log_binned,
                      fractional_ranks, ordinal_ranks, pearson, rank_vector,
                      spearman)
from .wikitext import (BiographyDoc, CatalogueEntry, WikiParseError,
                       extract_links, normalize_title, parse_catalogue,
                       parse_export, parse_links)

__version__ = "0.1.0"
