"""Determinants of block-tridiagonal matrices via transfer matrices."""

from .core import (
    BlockTridiagSpec,
    LogDet,
    Polynomial,
    lu_det,
    lu_logdet,
    lu_solve,
    mat_mul,
    poly_interpolate,
    poly_roots,
    singularity_guard,
)
from .determinants import (
    charpoly,
    charpoly_roots,
    charpoly_eval,
    det,
    det_corners,
    det_corners_product_variant,
    det_corners_variant_inverse,
    det_no_corners,
    det_salkuyeh,
    det_scalar,
    det_scalar_corners,
    dual_roots,
    null_vector,
    salkuyeh_lambda_from_transfer,
    salkuyeh_lambdas,
    transfer_det,
    transfer_det_product,
)
from .errors import *  # noqa: F401,F403
from .instances import circulant3, random_spec, scalar_spec
from .oracle import assemble_dense, charpoly_dense, det_dense
from .transfer import (
    TransferMatrix,
    build_transfer,
    build_transfer_no_corners,
    partial_transfer,
)

__version__ = "0.1.0"
