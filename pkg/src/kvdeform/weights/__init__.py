"""Configuration-space weights of Kontsevich graphs, plain and deformed over the eye."""
from .angle import CoincidentPoints, angle, angle_geodesic, gradients
from .cache import WeightCache, default_cache, set_default_cache
from .charts import CHARTS, IRIS_EPSILON, ChartError, EyePoint
from .integrate import IntegrationError, Layout, WeightEstimate, integrate
from .lid import bernoulli_lid, bernoulli_lid_exact, bernoulli_polynomial, lid_polynomial
from .stokes import (Face, StokesReport, UnsupportedFace, enumerate_faces, ladder_lid_ode_residual,
                     lid_ode_residual, stokes_residual)
from .weight import ORIENTATION, NonIntegrable, canonical_form, deformed_weight, layout_of, weight_mc
