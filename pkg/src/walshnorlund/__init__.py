"""Exact computation for Walsh-Fourier Norlund summability on [0,1).

Kernels (Dirichlet, Fejer, Norlund), means and maximal means, L_p /
weak-L_1 / dyadic-Hardy quasi-norms, weight-family boundedness criteria,
and reproducible experiment harnesses, all over exact rational step
functions (with a high-precision real backend where roots force it).
"""

__version__ = "0.1.0"

from .dyadic import BinaryIndex, DyadicInterval, DyadicPoint, dyadic_add, walsh_eval
from .kernels import (KernelDecomposition, decompose_kernel, dirichlet, fejer,
                      fejer_l1_norms, fejer_shift_form, kernel_sup, norlund_kernel)
from .means import (DualPathMismatch, convolve, fejer_mean, maximal_mean,
                    multiplier_mean, norlund_mean, partial_sum)
from .norms import (NormValue, PAtom, dyadic_maximal, hardy_norm, haar_atom,
                    lp_quasinorm, make_p_atom, weak_l1_norm)
from .stepfunc import StepFunction, walsh_function
from .weights import (CriterionReport, WeightSequence, criterion_h1, criterion_hp,
                      load_custom, make_family, norm_equivalence_rhs, prefix_sum,
                      q_doubling_check, regularity_check)

__all__ = [
    "BinaryIndex", "DyadicInterval", "DyadicPoint", "dyadic_add", "walsh_eval",
    "KernelDecomposition", "decompose_kernel", "dirichlet", "fejer",
    "fejer_l1_norms", "fejer_shift_form", "kernel_sup", "norlund_kernel",
    "DualPathMismatch", "convolve", "fejer_mean", "maximal_mean",
    "multiplier_mean", "norlund_mean", "partial_sum",
    "NormValue", "PAtom", "dyadic_maximal", "hardy_norm", "haar_atom",
    "lp_quasinorm", "make_p_atom", "weak_l1_norm",
    "StepFunction", "walsh_function",
    "CriterionReport", "WeightSequence", "criterion_h1", "criterion_hp",
    "load_custom", "make_family", "norm_equivalence_rhs", "prefix_sum",
    "q_doubling_check", "regularity_check",
    "__version__",
]
