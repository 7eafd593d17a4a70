"""Published reference distributions (k = 10000, delta = 0.01).

The printed coefficients are rounded to four decimals and do not sum to
exactly one; they are renormalized on load.  The printed average degrees are
kept separately for comparison.
"""
from .codec.distributions import DegreeDistribution

_FCC = {
    1: {1: 0.0098, 2: 0.4949, 3: 0.1597, 4: 0.1095, 6: 0.0437, 7: 0.0774,
        14: 0.0026, 15: 0.0661, 50: 0.0358},
    2: {1: 0.0067, 2: 0.4749, 3: 0.1543, 4: 0.0884, 5: 0.0550, 8: 0.0966,
        20: 0.0466, 21: 0.0184, 50: 0.0586},
    3: {1: 0.0050, 2: 0.4446, 3: 0.1050, 4: 0.1691, 11: 0.1753, 50: 0.1007},
    4: {1: 0.0061, 2: 0.4243, 3: 0.1843, 4: 0.0714, 9: 0.2249, 50: 0.0887},
}
FCC_MEAN = {1: 5.5442, 2: 7.0752, 3: 8.8531, 4: 8.15}

# keyed by (M, N/k)
_PCC = {
    (2, 0.1): {1: 0.0069, 2: 0.4898, 3: 0.1656, 4: 0.0883, 6: 0.1169,
               13: 0.0666, 14: 0.0207, 50: 0.0447},
    (2, 0.05): {1: 0.0069, 2: 0.4889, 3: 0.1691, 4: 0.0743, 5: 0.0224,
                6: 0.1050, 13: 0.0693, 14: 0.0187, 50: 0.0451},
    (3, 0.1): {1: 0.0057, 2: 0.4907, 3: 0.1660, 4: 0.0883, 6: 0.1172,
               13: 0.0659, 14: 0.0214, 50: 0.0446},
    (3, 0.05): {1: 0.0057, 2: 0.4899, 3: 0.1686, 4: 0.0769, 5: 0.0182,
                6: 0.1077, 13: 0.0666, 14: 0.0210, 50: 0.0448},
    (4, 0.1): {1: 0.0049, 2: 0.4913, 3: 0.1661, 4: 0.0883, 6: 0.1173,
               13: 0.0653, 14: 0.0220, 50: 0.0445},
    (4, 0.05): {1: 0.0049, 2: 0.4905, 3: 0.1680, 4: 0.0799, 5: 0.0135,
                6: 0.1106, 13: 0.0644, 14: 0.0230, 50: 0.0448},
}
PCC_MEAN = {(2, 0.1): 5.93, (2, 0.05): 5.95, (3, 0.1): 5.92, (3, 0.05): 5.94,
            (4, 0.1): 5.92, (4, 0.05): 5.94}

# distribution used for the per-frame partial recovery curve at k=1000, N=100
PARTIAL_RECOVERY_OMEGA = {1: 0.05, 2: 0.55, 4: 0.25, 6: 0.05, 8: 0.1}


def fcc_table(M: int) -> DegreeDistribution:
    return DegreeDistribution.from_weights(_FCC[M])


def fcc_tables(M: int) -> list[DegreeDistribution]:
    """Phase distributions Phi^(1)..Phi^(M): Phi^(n) is the n-user design."""
    return [fcc_table(n) for n in range(1, M + 1)]


def pcc_table(M: int, ratio: float = 0.1) -> DegreeDistribution:
    return DegreeDistribution.from_weights(_PCC[(M, ratio)])


def partial_recovery_omega() -> DegreeDistribution:
    return DegreeDistribution(PARTIAL_RECOVERY_OMEGA)
