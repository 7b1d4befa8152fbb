"""scikit-learn style wrappers so the detectors compose with Pipelines.

All estimators keep their constructor arguments untouched (so clone and
get_params/set_params behave), validate lazily, and treat X as one 2D
grayscale image. Filters and Canny are stateless transformers; the
detectors expose detect(); the generalized Hough detector is genuinely
stateful: fit() learns the shape table from a model image and predict()
locates it in scenes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .canny import (TRANSITIVE, CannyParams, double_threshold, hysteresis,
                    non_maximum_suppression)
from .canny import canny as run_canny
from .filters import (adaptive_wiener_filter, gaussian_blur, hybrid_filter,
                      mean_filter, median_filter)
from .ght import GhtParams, build_rtable, ght_accumulate, locate_shape
from .gradients import SOBEL, first_order_gradient
from .harris import HarrisParams, harris_corners, harris_response, \
    structure_tensor
from .hough import (decode_lines, effective_vote_threshold, find_peaks,
                    hough_circle_accumulate, hough_line_accumulate)
from .validation import REPLICATE, check_edge_map, check_image


class MeanFilter(BaseEstimator, TransformerMixin):
    """Window-mean smoother (suppresses Gaussian noise)."""

    def __init__(self, radius=1, border=REPLICATE):
        self.radius = radius
        self.border = border

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return mean_filter(X, self.radius, self.border)


class MedianFilter(BaseEstimator, TransformerMixin):
    """Window-median smoother (kills salt/pepper impulses)."""

    def __init__(self, radius=1, border=REPLICATE):
        self.radius = radius
        self.border = border

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return median_filter(X, self.radius, self.border)


class GaussianSmoother(BaseEstimator, TransformerMixin):
    def __init__(self, sigma=1.0, border=REPLICATE):
        self.sigma = sigma
        self.border = border

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return gaussian_blur(X, self.sigma, self.border)


class WienerFilter(BaseEstimator, TransformerMixin):
    """Adaptive local mean/variance smoother; noise_variance None = auto."""

    def __init__(self, radius=1, noise_variance=None):
        self.radius = radius
        self.noise_variance = noise_variance

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return adaptive_wiener_filter(X, self.radius, self.noise_variance)


class HybridFilter(BaseEstimator, TransformerMixin):
    """Median pass followed by auto-noise Wiener smoothing."""

    def __init__(self, radius=1):
        self.radius = radius

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return hybrid_filter(X, self.radius)


class GradientMagnitude(BaseEstimator, TransformerMixin):
    """First-order gradient magnitude plane of an image."""

    def __init__(self, operator=SOBEL, border=REPLICATE):
        self.operator = operator
        self.border = border

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return first_order_gradient(check_image(X), self.operator,
                                    self.border).magnitude


class CannyDetector(BaseEstimator, TransformerMixin):
    """Full Canny pipeline; transform() returns the boolean edge map."""

    def __init__(self, sigma=1.0, low=0.1, high=0.3, threshold_mode="ratio",
                 connectivity=TRANSITIVE):
        self.sigma = sigma
        self.low = low
        self.high = high
        self.threshold_mode = threshold_mode
        self.connectivity = connectivity

    def _params(self):
        return CannyParams(sigma=self.sigma, low=self.low,
                                  high=self.high,
                                  threshold_mode=self.threshold_mode,
                                  connectivity=self.connectivity)

    def fit(self, X, y=None):
        self._params()
        return self

    def transform(self, X):
        return run_canny(X, self._params())


class HarrisCornerDetector(BaseEstimator, TransformerMixin):
    """Harris response; transform() gives the response plane,
    detect() the thresholded, suppressed corner list."""

    def __init__(self, k=0.04, window_sigma=1.0, threshold=0.01,
                 threshold_mode="ratio", nms_radius=1):
        self.k = k
        self.window_sigma = window_sigma
        self.threshold = threshold
        self.threshold_mode = threshold_mode
        self.nms_radius = nms_radius

    def _params(self):
        return HarrisParams(k=self.k, window_sigma=self.window_sigma,
                                    threshold=self.threshold,
                                    threshold_mode=self.threshold_mode,
                                    nms_radius=self.nms_radius)

    def fit(self, X, y=None):
        self._params()
        return self

    def transform(self, X):
        fld = first_order_gradient(check_image(X), SOBEL)
        tensor = structure_tensor(fld, self.window_sigma)
        return harris_response(tensor, self.k)

    def detect(self, X):
        return harris_corners(X, self._params())


class HoughLineDetector(BaseEstimator):
    """Polar line voting on a boolean edge map; detect() returns
    (rho, theta, votes) triples, best first."""

    def __init__(self, theta_bins=180, rho_step=1.0, threshold=0.5,
                 threshold_mode="ratio", nms_radius=2):
        self.theta_bins = theta_bins
        self.rho_step = rho_step
        self.threshold = threshold
        self.threshold_mode = threshold_mode
        self.nms_radius = nms_radius

    def fit(self, X, y=None):
        return self

    def detect(self, X):
        acc = hough_line_accumulate(check_edge_map(X),
                                           self.theta_bins, self.rho_step)
        needed = effective_vote_threshold(acc, self.threshold,
                                                 self.threshold_mode)
        peaks = find_peaks(acc, needed, self.nms_radius)
        lines = decode_lines(peaks, acc)
        return [(line.rho, line.theta, peak.votes)
                for line, peak in zip(lines, peaks)]


class HoughCircleDetector(BaseEstimator):
    """Fixed-radius center voting, swept over a radius list; detect()
    returns (a, b, r, votes) per peak."""

    def __init__(self, radii=(25.0,), theta_steps=360, threshold=0.5,
                 threshold_mode="ratio", nms_radius=2):
        self.radii = radii
        self.theta_steps = theta_steps
        self.threshold = threshold
        self.threshold_mode = threshold_mode
        self.nms_radius = nms_radius

    def fit(self, X, y=None):
        return self

    def detect(self, X):
        edges = check_edge_map(X)
        found = []
        for radius in self.radii:
            acc = hough_circle_accumulate(edges, radius, self.theta_steps)
            needed = effective_vote_threshold(acc, self.threshold,
                                                     self.threshold_mode)
            for peak in find_peaks(acc, needed, self.nms_radius):
                found.append((peak.value1, peak.value0, float(radius), peak.votes))
        found.sort(key=lambda c: -c[3])
        return found


class GeneralizedHoughDetector(BaseEstimator):
    """Learn an arbitrary shape from a model image, then locate its
    translations in scenes.

    fit() runs Canny on the model image, samples Sobel phase at the edge
    pixels, and stores the displacement table (rtable_); predict()
    repeats the same edge/phase extraction on the scene and votes.
    """

    def __init__(self, phi_bins=64, sigma=1.0, low=0.1, high=0.3,
                 threshold=0.5, threshold_mode="ratio", nms_radius=2,
                 reference_point=None):
        self.phi_bins = phi_bins
        self.sigma = sigma
        self.low = low
        self.high = high
        self.threshold = threshold
        self.threshold_mode = threshold_mode
        self.nms_radius = nms_radius
        self.reference_point = reference_point

    def _edges_and_orientation(self, image):
        image = check_image(image)
        params = CannyParams(sigma=self.sigma, low=self.low, high=self.high)
        blurred = gaussian_blur(image, self.sigma)
        fld = first_order_gradient(blurred, SOBEL)
        thin = non_maximum_suppression(fld)
        classes = double_threshold(thin, params)
        edges = hysteresis(classes, params.connectivity)
        return edges, fld.orientation

    def fit(self, X, y=None):
        edges, orientation = self._edges_and_orientation(X)
        if self.reference_point is not None:
            ref = self.reference_point
        else:
            ys, xs = np.nonzero(edges)
            if len(xs) == 0:
                raise ValueError("model image produced no edge pixels")
            ref = (int(np.rint(xs.mean())), int(np.rint(ys.mean())))
        self.rtable_ = build_rtable(edges, orientation, ref, self.phi_bins)
        return self

    def predict(self, X):
        if not hasattr(self, "rtable_"):
            raise NotFittedError("fit a model image before predicting")
        edges, orientation = self._edges_and_orientation(X)
        acc = ght_accumulate(edges, orientation, self.rtable_)
        params = GhtParams(phi_bins=self.phi_bins,
                                threshold=self.threshold,
                                threshold_mode=self.threshold_mode,
                                nms_radius=self.nms_radius)
        return locate_shape(acc, params)
