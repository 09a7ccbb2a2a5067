"""Published benchmark values (errors |x_n - alpha| for n = 1, 2, 3) and comparison helpers."""

import math

METHODS = ("mns", "osada", "dong", "chun")

ERRORS = {
    "f1": {"mns": (0.739e-3, 0.364e-9, 0.434e-28), "osada": (0.162e-2, 0.106e-7, 0.304e-23),
           "dong": (0.955e-3, 0.111e-8, 0.175e-26), "chun": (0.112e-2, 0.215e-8, 0.149e-25)},
    "f2": {"mns": (0.166e-4, 0.246e-17, 0.793e-39), "osada": (0.719e-4, 0.876e-15, 0.793e-39),
           "dong": (0.277e-4, 0.189e-16, 0.793e-39), "chun": (0.376e-4, 0.667e-16, 0.793e-39)},
    "f3": {"mns": (0.128e-1, 0.325e-4, 0.531e-12), "osada": (0.268e-1, 0.105e-2, 0.871e-7),
           "dong": (0.212e-1, 0.333e-3, 0.143e-86), "chun": (0.216e-1, 0.362e-3, 0.190e-8)},
    "f4": {"mns": (0.223e-3, 0.864e-14, 0.918e-39), "osada": (0.792e-4, 0.139e-15, 0.918e-39),
           "dong": (0.122e-4, 0.742e-19, 0.918e-39), "chun": (0.987e-4, 0.340e-15, 0.918e-39)},
}

COC = {
    "f1": (3.0000, 3.0000, 3.0000, 3.0000),
    "f2": (3.0000, 3.0000, 3.0000, 3.0000),
    "f3": (3.0000, 2.9964, 2.9993, 2.9993),
    "f4": (3.0000, 3.0000, 3.0000, 3.0000),
}
ACOC = {
    "f1": (2.9999, 2.9994, 2.9998, 2.9998),
    "f2": (3.0000, 3.0000, 3.0000, 3.0000),
    "f3": (3.0004, 2.9428, 2.9857, 2.9858),
    "f4": (3.0000, 3.0000, 3.0000, 3.0000),
}


def matches_2sf(value, published) -> bool:
    """|value - published| within half a unit in the second significant figure of published."""
    value, published = float(value), float(published)
    unit = 10 ** (math.floor(math.log10(published)) - 1)
    return abs(value - published) <= 0.5 * unit
