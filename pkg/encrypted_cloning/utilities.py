from typing import Any

import numpy as np


def to_builtin(value: Any) -> Any:
    """Converts numpy scalars and arrays, tuples and nested containers to JSON-ready builtins.

    Complex numbers become ``[re, im]`` pairs.

    Examples:
        >>> to_builtin({"a": np.float64(0.5), "b": (1, 2j)})
        {'a': 0.5, 'b': [1, [0.0, 2.0]]}
    """
    if isinstance(value, dict):
        return {str(key): to_builtin(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_builtin(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def format_real(value: float, precision: int = 6) -> str:
    """Signed short form of a real coefficient; integers lose their decimal point.

    Examples:
        >>> format_real(-0.25)
        '-0.25'
        >>> format_real(4.0)
        '+4'
    """
    value = float(value)
    if value == 0.0:
        value = 0.0
    return f"{value:+.{precision}g}"


def format_coefficient(value: complex, precision: int = 6) -> str:
    value = complex(value)
    if abs(value.imag) <= 1e-12:
        return format_real(value.real, precision)
    if abs(value.real) <= 1e-12:
        return format_real(value.imag, precision) + "i"
    return f"({value.real:.{precision}g}{value.imag:+.{precision}g}i)"
