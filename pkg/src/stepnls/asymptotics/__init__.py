from .airy import seam_mismatch
from .family import family_params, halfline_family, matching_report
from .left import (D_left, Db_left, Dinf_left, J_integral, LeftQuantities, g_left, k0_left,
                   left_quantities, u_a, u_left, ux_left)
from .middle import (MiddleQuantities, g_inf, g_middle, k0_middle, middle_quantities, scriptD,
                     subleading_from_residue, subleading_residue, u_middle)
from .parametrix import (airy_model, airy_series_coeff, airy_series_coeff_uv, airy_truncation_error,
                         global_parametrix)
from .right import RightQuantities, right_quantities, u_right
from ..background import Sector, classify_sector


def u_asymptotic(p, r, x: float, t: float) -> dict:
    """Sector-appropriate asymptotic value at (x, t)."""
    sec = classify_sector(p, x, t)
    if sec is Sector.MIDDLE:
        lead, sub = u_middle(p, r, x, t)
    elif sec is Sector.LEFT:
        lead, sub = u_left(p, r, x, t)
    elif sec is Sector.RIGHT:
        lead, sub = u_right(p, r, x, t), 0j
    else:
        raise ValueError(f"(x, t) = ({x}, {t}) lies in a transition region")
    return {"sector": sec.value, "leading": lead, "sub": sub}
