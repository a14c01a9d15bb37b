from .base import EpsilonPredictor, GroundTruthPredictor, ground_truth_predict
from .oracle import GaussianDataSpec, GaussianOracle, oracle_predict
from .denoiser import DenoiserModel, ForwardCache, denoiser_forward, denoiser_backward, mse_loss
from .training import TrainingLog, train
from .gradcheck import GradcheckReport, gradient_check, run_gradcheck
from .storage import save_models, load_models, dump_models, parse_models

__all__ = [
    "EpsilonPredictor",
    "GroundTruthPredictor",
    "ground_truth_predict",
    "GaussianDataSpec",
    "GaussianOracle",
    "oracle_predict",
    "DenoiserModel",
    "ForwardCache",
    "denoiser_forward",
    "denoiser_backward",
    "mse_loss",
    "TrainingLog",
    "train",
    "GradcheckReport",
    "gradient_check",
    "run_gradcheck",
    "save_models",
    "load_models",
    "dump_models",
    "parse_models",
]
