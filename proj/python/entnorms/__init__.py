"""Schmidt-decomposition entanglement norms and preserver classification."""

try:
    from ._core import (  # type: ignore[attr-defined]
        S_norm,
        brute_force_S_norm,
        check_preserver,
        classify_local_form,
        gme,
        recover_local_form,
        s_norm,
        schmidt_coefficients,
        schmidt_rank,
    )
except ImportError:  # in-tree builds place _core next to the build directory
    from _core import (  # type: ignore[no-redef]
        S_norm,
        brute_force_S_norm,
        check_preserver,
        classify_local_form,
        gme,
        recover_local_form,
        s_norm,
        schmidt_coefficients,
        schmidt_rank,
    )

__all__ = [
    "S_norm",
    "brute_force_S_norm",
    "check_preserver",
    "classify_local_form",
    "gme",
    "recover_local_form",
    "s_norm",
    "schmidt_coefficients",
    "schmidt_rank",
]

__version__ = "0.1.0"
