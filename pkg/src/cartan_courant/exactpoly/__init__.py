from .forms import PolyForm, differential, exterior_derivative, sort_with_sign
from .parse import PolyParseError, parse_poly
from .poly import Poly, Rational, format_poly, rational

__all__ = [
    "Poly",
    "PolyForm",
    "PolyParseError",
    "Rational",
    "differential",
    "exterior_derivative",
    "format_poly",
    "parse_poly",
    "rational",
    "sort_with_sign",
]
