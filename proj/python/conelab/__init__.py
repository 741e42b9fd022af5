"""Python access to the conelab core.

Forms are passed as polynomial documents (JSON text), for example
{"n": 3, "degree": 2, "terms": [[[2, 0, 0], "1"], [[0, 2, 0], "-1/2"]]}.
"""

import json

from ._conelab import (  # noqa: F401
    DimensionMismatchError,
    FormatError,
    UnsupportedError,
    UsageError,
    apply_t,
    bound_table,
    dim_mean_zero,
    evaluate,
    gauge,
    harmonic_decompose,
    inner_product,
    metric_ratio,
    normalize_form,
    normalized_volume,
    project_to_M,
    r_power,
    run,
    sos_feasible,
    t_spectrum,
)


def form(n, degree, terms):
    """Build a polynomial document from [(exponents, coefficient), ...]."""
    return json.dumps({"n": n, "degree": degree, "terms": [[list(e), str(c)] for e, c in terms]})


def run_config(**config):
    """Run a command given config fields; returns (report dict, exit code)."""
    text, code = run(json.dumps(config))
    return json.loads(text), code
