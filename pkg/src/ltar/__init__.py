"""Forecasting matrix-valued time series with transform-based tensor autoregression."""

from ltar.differencing import DifferenceOrder
from ltar.errors import (
    FormatError,
    ImaginaryResidueError,
    InsufficientDataError,
    LtarError,
    ShapeError,
    SingularSystemError,
)
from ltar.model import (
    ForecastMode,
    ForecastResult,
    LtarModel,
    fit_with_differencing,
    forecast,
    ltar_fit,
    ltar_predict_one,
    simulate_ltar,
)
from ltar.tensor import Tensor3, TensorSeries
from ltar.transforms import TransformKind, l_product

__version__ = "0.1.0"
