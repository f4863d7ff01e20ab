import hashlib
import json
import math
from datetime import datetime
from enum import Enum

import numpy as np
from pydantic import BaseModel

SIGNIFICANT_DIGITS = 12


class CustomJSONEncoder(json.JSONEncoder):
    def default(self, obj):
        if isinstance(obj, datetime):
            return obj.isoformat()
        elif isinstance(obj, BaseModel):
            return to_serializable(obj)
        elif isinstance(obj, Enum):
            return obj.value
        elif isinstance(obj, np.ndarray):
            return to_serializable(obj.tolist())
        elif isinstance(obj, (np.floating, np.integer, np.bool_)):
            return obj.item()
        elif isinstance(obj, complex):
            return to_serializable(obj)
        return super().default(obj)


def round_significant(value: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    """Round a float to `digits` significant digits; non-finite values pass through."""
    if not math.isfinite(value) or value == 0.0:
        return value
    return float(f"{value:.{digits}g}")


def to_serializable(obj):
    """
    Convert reports into plain JSON types.

    Floats are rounded to 12 significant digits, complex numbers become
    {"re": ..., "im": ...} and numpy arrays become nested lists.
    """
    if isinstance(obj, BaseModel):
        return to_serializable(obj.model_dump())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(key): to_serializable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_serializable(item) for item in obj]
    if isinstance(obj, np.ndarray):
        return to_serializable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": round_significant(float(obj.real)), "im": round_significant(float(obj.imag))}
    if isinstance(obj, (float, np.floating)):
        return round_significant(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def dumps_report(report: dict) -> str:
    """Serialize a report with 12 significant digit floats."""
    return json.dumps(to_serializable(report), cls=CustomJSONEncoder, indent=2, allow_nan=True)


def get_content_hash(content: bytes) -> str:
    """
    Computes the SHA-256 hash of a file's content.
    """
    return hashlib.sha256(content).hexdigest()


def validate_output(data):
    """Validate the serialized report structure"""
    if not isinstance(data, dict):
        raise ValueError("Invalid report format: expected dictionary")
    missing = {"version", "config"} - set(data)
    if missing:
        raise ValueError(f"Invalid report format: missing keys {sorted(missing)}")
