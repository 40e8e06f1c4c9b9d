"""Cross-coin correlation, causality and price-forecasting toolkit."""

from cryptoforecast._core import (
    GbtModel,
    RnnModel,
    adf_test,
    chi2_survival,
    compute_metrics,
    integration_order,
    intensity_class,
    kpss_test,
    pearson,
    toda_yamamoto,
    window_mean,
)

__all__ = [
    "GbtModel",
    "RnnModel",
    "adf_test",
    "chi2_survival",
    "compute_metrics",
    "integration_order",
    "intensity_class",
    "kpss_test",
    "pearson",
    "toda_yamamoto",
    "window_mean",
]
