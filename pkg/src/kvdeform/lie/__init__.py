"""Free Lie algebra engine and evaluation on concrete Lie algebras."""
from .algebra import BUILTIN, AlgebraError, LieAlgebraSpec, get_algebra
from .bch import bch_oracle, single_y_coefficients
from .evaluate import ad_matrix, eval_on_algebra
from .poly import CoordinatePolynomial
from .series import AlphabetMismatch, LieSeries, bracket, directional_derivative, substitute
from .words import is_lyndon, lyndon_words, witt_number
