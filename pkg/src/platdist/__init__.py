"""Bridge-sphere distance of highly twisted plats: formula, certificates and audits."""

from .plat import (BraidWord, PlatError, PlatPresentation, bridge_distance_formula, format_plat,
                   is_highly_twisted, is_row_highly_twisted, parse_plat, plat_to_braid, projection_word,
                   uniqueness_threshold)
from .curves import (CurveDiagram, PunctureWord, apply_braid, apply_generator, bounds_above, bounds_below,
                     canonical_loop, geometric_intersection, puncture_word, round_curve)
from .tracks import (PlatTrack, build_plat_track, classify_tao_arcs, count_covered, covers, is_almost_carried,
                     is_carried, is_transverse, make_transverse)
from .distance import (AuditFailure, DistanceCertificate, VerificationError, audit_lower_bound,
                       upper_bound_path, verify_certificate, verify_path)
from .oracle import BudgetExceeded, CurveInventory, bfs_distance, enumerate_curves, load_or_enumerate
from .render import render_curve, render_plat, render_track

__version__ = "0.1.0"
