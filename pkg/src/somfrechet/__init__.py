"""Self-organizing maps compared as points of a finite metric space."""
from .core import (Assignment, DistanceMatrix, GridSpec, GroupedSample, MetricKind, Som,
                   TestResult, ValidationError, Volume, validate_volume)
from .inference import (bonferroni_adjust, f_statistic, frechet_variance, permutation_test,
                        restricted_frechet_mean, t_statistic)
from .jaccard import global_jaccard, jaccard_distance, overlap_report, sample_jaccard_index
from .kernels import BACKEND
from .metrics import metric_closure, pairwise_distances, s_smd, st_smd, t_smd
from .synth import ScenarioSpec, generate_study, generate_subject
from .trainer import TrainingSchedule, batch_step, train_batch, train_sequential

__version__ = "0.1.0"
