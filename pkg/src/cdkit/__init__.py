"""cdkit: inductive community detection across graphs.

Train an adversarial dual-GNN offline on labeled historical graphs, then
detect communities on new graphs with a single feedforward pass plus k-means.
Ships with the benchmark generators, quality metrics, reference baselines and
the trade-off scoring used to validate the pipeline.
"""

from .baselines import baseline_greedy_modularity, baseline_spectral
from .coarsen import CoarseningMap, FeatureMatrix, extract_features, hem_coarsen
from .dataset import DatasetSplit, load_dataset, write_dataset
from .errors import (CapabilityError, DegenerateGraphError, DegeneratePartitionError,
                     GenerationError, InputError, NormalizationError,
                     TrainingDivergedError)
from .estimator import InductiveCommunityDetector
from .generators import GnSpec, LfrSpec, generate_gn, generate_lfr
from .graph import (Graph, StructMatrix, build_graph, load_edge_list,
                    modularity_matrix, modularity_score, ncut_score, norm_adj,
                    norm_laplacian, save_edge_list)
from .harness import run_eval, tos
from .kmeans import KMeansResult, kmeans
from .model import (Checkpoint, TrainConfig, TrainResult, infer, init_checkpoint,
                    load_checkpoint, save_checkpoint, train)
from .partition import (Partition, accuracy, indicator, label_induced_adjacency,
                        load_labels, nmi, save_labels)

__version__ = "0.1.0"

__all__ = [
    "Graph", "StructMatrix", "build_graph", "load_edge_list", "save_edge_list",
    "modularity_matrix", "norm_adj", "norm_laplacian", "modularity_score",
    "ncut_score", "Partition", "indicator", "label_induced_adjacency", "nmi",
    "accuracy", "load_labels", "save_labels", "CoarseningMap", "FeatureMatrix",
    "hem_coarsen", "extract_features", "GnSpec", "LfrSpec", "generate_gn",
    "generate_lfr", "KMeansResult", "kmeans", "TrainConfig", "Checkpoint",
    "TrainResult", "train", "infer", "init_checkpoint", "save_checkpoint",
    "load_checkpoint", "DatasetSplit", "load_dataset", "write_dataset",
    "baseline_spectral", "baseline_greedy_modularity", "run_eval", "tos",
    "InductiveCommunityDetector", "InputError", "DegenerateGraphError",
    "DegeneratePartitionError", "GenerationError", "TrainingDivergedError",
    "NormalizationError", "CapabilityError",
]
