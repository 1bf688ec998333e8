"""Skill of directional (Up/Down) forecasts of one or several variables.

Scores 2x2 forecast/observation tables with the Prediction Skill Index
(PSI) and the Peirce, Phi, Heidke and Clayton scores, classifies value
series into directional outcomes with an optional band around the forecast,
and combines per-variable PSI values into a joint score.
"""

from .classify import (
    BandSpec,
    ClassificationConfig,
    Direction,
    Outcome,
    SeriesPair,
    classify_point,
    classify_series,
    direction,
    sd_of_changes,
    to_table,
)
from .composite import CompositeInput, CompositeResult, composite_index, joint_psi, psi_n
from .contingency import ContingencyTable, from_counts, marginals, merge
from .errors import *  # noqa: F401,F403
from .scores import ScoreSet, css, hss, mse, phi, pss, psi, score_table, skill_score, theil_u

__version__ = "0.1.0"
