# src/schemas/encoding
"""
JSON-кодирование точек сферы Римана: комплексное число - [re, im], ∞ - строка "inf"
"""
from typing import List, Literal, Tuple, Union

from src.geometry.moebius import INF, ExtendedComplex, as_point, is_inf

PointJSON = Union[Literal["inf"], Tuple[float, float]]
ComplexJSON = Tuple[float, float]


def complex_to_json(z: complex) -> ComplexJSON:
    z = complex(z)
    return (z.real, z.imag)


def complex_from_json(value) -> complex:
    re, im = value
    return complex(float(re), float(im))


def point_to_json(p: ExtendedComplex) -> PointJSON:
    if is_inf(p):
        return "inf"
    return complex_to_json(p)


def point_from_json(value) -> ExtendedComplex:
    if value == "inf" or value is INF:
        return INF
    return as_point(complex_from_json(value))


def points_to_json(points) -> List[PointJSON]:
    return [point_to_json(p) for p in points]
