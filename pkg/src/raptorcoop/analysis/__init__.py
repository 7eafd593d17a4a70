from .andor import AndOrModel, AndOrResult, and_or_iterate, history_csv, single_user_model
from .bounds import PccBound, fcc_throughput_bound, pcc_throughput_bound
from .fcc import fcc_2user_model, fcc_muser_model, fcc_union_model, type_counts
from .pcc import (PartsLayout, PccRecursion, exact_type_counts, pcc_destination_model,
                  pcc_destination_unrecovered, pcc_user_recursion, symmetric_received,
                  transcript_layout, transcript_received, transcript_type_counts,
                  union_type_counts, user_unrecovered)
from .predict import Prediction, completion_threshold, predict

__all__ = [
    "AndOrModel", "AndOrResult", "PartsLayout", "PccBound", "PccRecursion", "Prediction",
    "and_or_iterate", "completion_threshold", "exact_type_counts", "fcc_2user_model",
    "fcc_muser_model", "fcc_throughput_bound", "history_csv", "fcc_union_model", "pcc_destination_model",
    "pcc_destination_unrecovered", "pcc_throughput_bound", "pcc_user_recursion", "predict",
    "single_user_model", "symmetric_received", "transcript_layout", "transcript_received",
    "transcript_type_counts", "type_counts", "union_type_counts", "user_unrecovered",
]
