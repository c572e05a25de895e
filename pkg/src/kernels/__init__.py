"""Kernels with evaluation, composition and certified constants."""

from .audit import (
    ProfileGradientPeak,
    argument_lipschitz_probe,
    boundedness_probe,
    lipschitz_probe,
    profile_gradient_probe,
)
from .base import (
    CompositeKernel,
    GaussianKernel,
    KernelSpec,
    LaplacianKernel,
    TranslationInvariantKernel,
    compose,
    eval_kernel,
    gram_matrix,
)
from .config import KernelConfig, kernel_from_config
from .constants import GAUSSIAN_LIPSCHITZ_FACTOR, KernelConstants, certified_constants

__all__ = [
    "KernelSpec",
    "GaussianKernel",
    "LaplacianKernel",
    "TranslationInvariantKernel",
    "CompositeKernel",
    "KernelConstants",
    "KernelConfig",
    "GAUSSIAN_LIPSCHITZ_FACTOR",
    "certified_constants",
    "compose",
    "eval_kernel",
    "gram_matrix",
    "kernel_from_config",
    "boundedness_probe",
    "lipschitz_probe",
    "argument_lipschitz_probe",
    "profile_gradient_probe",
    "ProfileGradientPeak",
]
