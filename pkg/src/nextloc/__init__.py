"""Next-location prediction on trajectory data.

Builds time-slotted location transfer graphs from observed travel times,
precomputes shortest travel times, scores candidate next locations by
travel-time difference, fuses the score with a first-order Markov model,
and evaluates top-r accuracy and average precision.
"""

from .data import (
    Dataset,
    LocationIndex,
    Record,
    SplitConfig,
    Trajectory,
    as_dataset,
    filter_min_length,
    parse_records,
    sessionize,
    split,
)
from .evaluation import EvalQuery, EvalResult, evaluate, lambda_sweep, make_queries, run_repeated
from .graphs import (
    SlotConfig,
    TransferGraph,
    TransferGraphs,
    build_graphs,
    candidate_count_cdf,
    candidate_next_locations,
    slot_of,
)
from .joint import JointModel, joint_prob
from .markov import MarkovModel
from .markov import train as train_markov
from .shortest import ShortestTimeTable, precompute
from .synth import AgentSpec, GridSpec, generate
from .ttdm import InverseFunction, TravelTimeModel, TtdmScore, score_candidates

__all__ = [
    "AgentSpec",
    "Dataset",
    "EvalQuery",
    "EvalResult",
    "GridSpec",
    "InverseFunction",
    "JointModel",
    "LocationIndex",
    "MarkovModel",
    "Record",
    "ShortestTimeTable",
    "SlotConfig",
    "SplitConfig",
    "Trajectory",
    "TransferGraph",
    "TransferGraphs",
    "TravelTimeModel",
    "TtdmScore",
    "as_dataset",
    "build_graphs",
    "candidate_count_cdf",
    "candidate_next_locations",
    "evaluate",
    "filter_min_length",
    "generate",
    "joint_prob",
    "lambda_sweep",
    "make_queries",
    "parse_records",
    "precompute",
    "run_repeated",
    "score_candidates",
    "sessionize",
    "slot_of",
    "split",
    "train_markov",
]
