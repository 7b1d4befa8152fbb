"""Classical edge, corner, and boundary detection toolkit.

Images are 2D float64 numpy arrays with samples in [0, 1]; derivative
planes are unbounded floats; edge maps are boolean arrays. Everything is
deterministic and pure. sklearn-style wrappers live in
``edgecraft.estimators`` (kept out of this namespace so importing the
package does not pull in scikit-learn).
"""

from .canny import (EDGE_NONE, EDGE_STRONG, EDGE_WEAK, CannyParams, canny,
                    double_threshold, hysteresis, non_maximum_suppression)
from .features import (CircleFeature, CornerFeature, FeatureRecord,
                       LineFeature, ShapeFeature, feature_from_json,
                       feature_to_json, read_features, write_features)
from .filters import (FilterSpec, adaptive_wiener_filter, apply_filter,
                      gaussian_blur, gaussian_kernel, gaussian_smooth,
                      hybrid_filter, mean_filter, median_filter)
from .ght import (GhtParams, RTable, build_rtable, ght_accumulate,
                  locate_shape, quantize_phase, rtable_from_text,
                  rtable_to_text)
from .gradients import (EIGHT, FOUR, PREWITT, ROBERTS, SOBEL, GradientField,
                        Kernel, convolve2d, first_order_gradient, laplacian)
from .harris import (Corner, HarrisParams, TensorField, detect_corners,
                     harris_corners, harris_response, structure_tensor,
                     tensor_eigenvalues)
from .hough import (Accumulator2D, BinAxis, CircleParam, HoughPeak,
                    LineParam, accumulator_image, decode_lines,
                    effective_vote_threshold, find_peaks,
                    hough_circle_accumulate, hough_line_accumulate)
from .io import (load_image, read_image_file, save_image, write_image_file)
from .overlay import (bresenham_line, clip_line_to_rect, midpoint_circle,
                      render_overlay)
from .raster import pad, sample
from .validation import (ABSOLUTE, RATIO_OF_MAX, REFLECT, REPLICATE, ZERO,
                         check_edge_map, check_image, check_plane)

__version__ = "0.1.0"
