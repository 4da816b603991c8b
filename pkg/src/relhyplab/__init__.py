"""Finite-window workbench for relative Cayley graph geometry.

Builds windows of groups with peripheral structure, estimates the
window-scale geometry constants, searches relative areas over the
ambient free product, checks metric small cancellation, and constructs
measured covering witnesses for asymptotic-dimension bounds.
"""

__version__ = "0.1.0"

from .errors import RelhypError  # noqa: F401
from .groups import (  # noqa: F401
    GroupElement,
    GroupSpec,
    coset_id,
    is_identity,
    length_X,
    length_rel,
    normal_form,
)
from .relcayley import (  # noqa: F401
    Path,
    Window,
    are_connected,
    build_window,
    components,
    is_isolated,
    rel_geodesics,
)
from .specfile import parse_spec_file, parse_spec_text, parse_word  # noqa: F401
