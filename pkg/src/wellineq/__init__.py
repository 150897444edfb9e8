"""Global multidimensional inequality from grouped income, schooling and mortality data.

National income follows a GB2 fitted to Lorenz ordinates, years of schooling a
censored generalized gamma fitted to attainment rates, and lifespan a period
life table. Global marginals are population mixtures, coupled by a mixture of
the independence and comonotonic copulas, and summarized by a multidimensional
Atkinson index.
"""

from ._optimize import FitConvergenceError
from .copula import (CommonRandomNumbers, DependenceSpec, JointSample, empirical_spearman,
                     sample_joint)
from .edu_prep import AgeAdjustInputs, unconditional_rates
from .gb2 import (GB2LorenzRegressor, Gb2Params, GroupedIncome, MomentError, fit_gb2_scale,
                  fit_gb2_shape, gb2_cdf, gb2_lorenz, gb2_mean, gb2_pdf, gb2_quantile,
                  gb2_sample)
from .gengamma import (AttainmentData, DegenerateDataError, GGAttainmentRegressor, GgParams,
                       fit_gg, gg_cdf, gg_mean, gg_pdf, gg_quantile, gg_sample)
from .lifetable import LifeTable, LifespanPdf, lifespan_sample, mix_pdfs, table_to_pdf
from .mixture import (BracketError, GlobalMarginal, global_cdf, global_quantile,
                      global_sample)
from .special import inv_reg_inc_beta, reg_inc_beta, reg_inc_gamma
from .wellbeing import (Goalposts, GoalpostTransformer, IndexParams, atkinson_multi,
                        atkinson_uni, ces_wellbeing, inequality_band, omega_sweep)

__version__ = "0.1.0"

__all__ = [
    "AgeAdjustInputs", "AttainmentData", "BracketError", "CommonRandomNumbers",
    "DegenerateDataError", "DependenceSpec", "FitConvergenceError", "GB2LorenzRegressor",
    "GGAttainmentRegressor", "Gb2Params", "GgParams", "GlobalMarginal", "GoalpostTransformer",
    "Goalposts", "GroupedIncome", "IndexParams", "JointSample", "LifeTable", "LifespanPdf",
    "MomentError", "atkinson_multi", "atkinson_uni", "ces_wellbeing", "empirical_spearman",
    "fit_gb2_scale", "fit_gb2_shape", "fit_gg", "gb2_cdf", "gb2_lorenz", "gb2_mean",
    "gb2_pdf", "gb2_quantile", "gb2_sample", "gg_cdf", "gg_mean", "gg_pdf", "gg_quantile",
    "gg_sample", "global_cdf", "global_quantile", "global_sample", "inequality_band",
    "inv_reg_inc_beta", "lifespan_sample", "mix_pdfs", "omega_sweep", "reg_inc_beta",
    "reg_inc_gamma", "sample_joint", "table_to_pdf", "unconditional_rates",
]
