"""Support tensor machines with low-rank tensor kernels.

A numpy library for binary classification of tensor data: dense
multilinear algebra, weighted HOSVD / CP / TT decompositions, four tensor
kernels (Gaussian, DuSK, subspace, WSEK), an SMO-based SVM on precomputed
Gram matrices, a seeded synthetic-data generator, and a benchmark harness
with repeated stratified cross-validation.
"""

from .decomp import (
    KruskalTensor,
    TTTensor,
    TuckerTensor,
    cp_als,
    equilibrate,
    kruskal_reconstruct,
    reweight,
    tt_reconstruct,
    tt_svd,
    tt_to_cp,
    tucker_reconstruct,
    tucker_to_cp,
    weighted_hosvd,
)
from .harness import (
    CellResult,
    CVReport,
    ExperimentConfig,
    emit_report,
    load_dataset,
    run_experiment,
    save_dataset,
)
from .kernels import (
    KernelSpec,
    dusk_kernel,
    gaussian_kernel,
    gram_matrix,
    kernel_value,
    scalar_kernel,
    subspace_kernel,
    wsek_kernel,
)
from .svm import (
    ConvergenceError,
    SvmModel,
    TrainingSet,
    decision_value,
    predict,
    train,
)
from .synth import LabeledSample, SynthConfig, generate
from .tensor import (
    fold,
    frobenius_norm,
    inner,
    load_tensor,
    matricize,
    mode_product,
    save_tensor,
)

__version__ = "0.1.0"

__all__ = [
    "KruskalTensor", "TTTensor", "TuckerTensor", "cp_als", "equilibrate",
    "kruskal_reconstruct", "reweight", "tt_reconstruct", "tt_svd", "tt_to_cp",
    "tucker_reconstruct", "tucker_to_cp", "weighted_hosvd",
    "CellResult", "CVReport", "ExperimentConfig", "emit_report",
    "load_dataset", "run_experiment", "save_dataset",
    "KernelSpec", "dusk_kernel", "gaussian_kernel", "gram_matrix",
    "kernel_value", "scalar_kernel", "subspace_kernel", "wsek_kernel",
    "ConvergenceError", "SvmModel", "TrainingSet", "decision_value",
    "predict", "train",
    "LabeledSample", "SynthConfig", "generate",
    "fold", "frobenius_norm", "inner", "load_tensor", "matricize",
    "mode_product", "save_tensor",
]
