"""Error exponents for Neyman-Pearson detection of renewal-sampled
Gauss-Markov processes: Kalman-filter Monte Carlo estimators, regular-sampling
closed forms, and detection-error simulation."""

import os
import sys


def _load_core():
    try:
        from . import _core  # installed layout
        return _core
    except ImportError:
        ext_dir = os.environ.get("GMDETECT_EXT_DIR")
        if not ext_dir:
            raise
        # development layout: extension lives in the build tree
        sys.path.insert(0, ext_dir)
        try:
            import _core
        finally:
            sys.path.remove(ext_dir)
        sys.modules[__name__ + "._core"] = _core
        return _core


_core = _load_core()

GaussMarkovModel = _core.GaussMarkovModel
RenewalSpec = _core.RenewalSpec
Method = _core.Method
ExponentEstimate = _core.ExponentEstimate
Orientation = _core.Orientation
DetectionResult = _core.DetectionResult

validate = _core.validate
scalar_ou = _core.scalar_ou
with_snr = _core.with_snr
expm = _core.expm
gramian = _core.gramian
lyapunov_qinf = _core.lyapunov_qinf
dare_solve = _core.dare_solve
sigma_solve = _core.sigma_solve
mc_exponent_h0_noise = _core.mc_exponent_h0_noise
mc_exponent_h0_signal = _core.mc_exponent_h0_signal
regular_exponents = _core.regular_exponents
scalar_regular_exponents = _core.scalar_regular_exponents
large_s_limits = _core.large_s_limits
estimate_beta = _core.estimate_beta

__all__ = [
    "GaussMarkovModel",
    "RenewalSpec",
    "Method",
    "ExponentEstimate",
    "Orientation",
    "DetectionResult",
    "validate",
    "scalar_ou",
    "with_snr",
    "expm",
    "gramian",
    "lyapunov_qinf",
    "dare_solve",
    "sigma_solve",
    "mc_exponent_h0_noise",
    "mc_exponent_h0_signal",
    "regular_exponents",
    "scalar_regular_exponents",
    "large_s_limits",
    "estimate_beta",
]

__version__ = "0.1.0"
