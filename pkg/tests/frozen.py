"""Reference values computed independently of the package.

Each value comes from closed forms. Cut-offs of the ratio cost
``C(theta) = theta / (1 - theta**2)`` solve the quadratic
``D theta**2 + (1 + rho) theta - D = 0`` for a value ``D``. Spends use
``-log(1 - theta**2) / 2``. The numbers are frozen here so that a
regression in the package cannot move its own expectations.
"""

# Linear Cournot, alpha = 1, I = 0.5, b = 1, rho = 0.1, B = 0.01.
S1_QUAD = (1.0 / 9.0, 4.0 / 9.0, 1.0 / 36.0, 0.25)
S1_MONOPOLY = (0.25, 0.5625)
S1 = {
    "theta1": 0.2793781,
    "theta2": 0.1943866,
    "gamma_comp": 0.063882,
    "gross_comp": 0.297466,
    "net_comp": 0.233585,
    "theta_rho": 0.2381975,
    "theta_u": 0.259126,
    "theta_B": 0.198017,
    "theta_star": 0.2381975,
    "gamma_rjv": 0.030126,
    "net_rjv": 0.258262,
    "net_delta": 0.024677,
    "spend_delta": -0.033756,
    "innovation_delta": -0.041181,
    "B_bar": 0.0203166,
    "rho_bar": 0.2,
    "psi": -0.1,
    "rho_bar_m": 1.0 / 15.0,
    "cs_comp": 0.2868424,
    "cs_rjv": 0.2883882,
    "cs_merger": 0.1662895,
    "theta_rho_m": 0.2642529,
    "theta_u_m": 0.2867962,
    "sigma_star": 2.0 / 7.0,
    "theta_nc1_half": 0.2242387,
    "theta_tilde1_full": 0.1243114,
    "pi_L_I0": 0.4722222,
    "theta1_L": 0.2989448,
}

# Linear Cournot, alpha = 2.2, I = 0.18, otherwise as above.
FAVOURABLE = {
    "theta1": 0.168194,
    "theta2": 0.156101,
    "theta_u": 0.177432,
    "theta_B": 0.198017,
    "gamma_rjv": 0.015994,
    "gamma_comp": 0.027352,
    "B_bar": 0.007174,
    "rho_bar": 0.039301,
    "innovation_delta": 0.009238,
    "spend_delta": -0.011357,
}

# Differentiated Bertrand, b = 0.5, c = 0.5, I = 0.2, rho = 0.1, B = 0.0005.
BERTRAND_QUAD = (0.037037, 0.090133, 0.026133, 0.072593)
BERTRAND = {
    "theta1": 0.048157,
    "theta2": 0.042161,
    "theta_star": 0.064379,
    "innovation_delta": 0.016221,
}

# Cut-offs at rate 0 for values 0.3, 0.2, 0.1 and 3 * 0.08.
RATE_ZERO_CUTOFFS = {0.3: 0.2769840, 0.2: 0.1925824, 0.1: 0.0990195, 0.24: 0.2275708}
