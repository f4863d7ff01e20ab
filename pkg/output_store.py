import os
from pathlib import Path
from typing import Optional

import pandas as pd
from dotenv import load_dotenv

from logger import configured_logger
from models import Trajectory
from utils import dumps_report, get_content_hash, validate_output

load_dotenv()

CSV_FLOAT_FORMAT = "%.12g"


class OutputError(Exception):
    def __init__(self, message: str, original_error: Optional[Exception] = None):
        super().__init__(message)
        self.original_error = original_error


class OutputStore:
    def __init__(self, base_dir: Optional[str] = None):
        self.base_dir = Path(base_dir or os.getenv("HGS_OUTPUT_DIR", "output"))

    def configure(self, base_dir: str):
        """Point the store at the directory of the effective run configuration."""
        self.base_dir = Path(base_dir)

    def _write(self, content: bytes, file_name: str) -> str:
        path = self.base_dir / file_name
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(content)
        except OSError as e:
            configured_logger.error(f"Could not write {path}: {e}")
            raise OutputError(f"Could not write {path} -> {e}", e) from e
        configured_logger.info(f"Wrote {path} (sha256 {get_content_hash(content)})")
        return str(path)

    def render_json(self, report: dict) -> str:
        """
        Serialize a report after checking it is self-describing.

        Args:
            report (dict): Report with at least "version" and "config" keys.

        Returns:
            str: JSON text, floats at 12 significant digits.
        """
        validate_output(report)
        return dumps_report(report)

    def write_json(self, report: dict, file_name: str) -> str:
        return self._write((self.render_json(report) + "\n").encode("utf-8"), file_name)

    @staticmethod
    def render_csv(frame: pd.DataFrame) -> str:
        return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")

    def write_csv(self, frame: pd.DataFrame, file_name: str) -> str:
        """
        Write a table in row order with a header row.

        Args:
            frame (pd.DataFrame): Columns in output order.
            file_name (str): Name relative to the output directory.

        Returns:
            str: Path of the written file.
        """
        return self._write(self.render_csv(frame).encode("utf-8"), file_name)


def trajectory_frame(trajectory: Trajectory) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "t": trajectory.t,
            "x": trajectory.states[:, 0],
            "y": trajectory.states[:, 1],
            "z": trajectory.states[:, 2],
        }
    )


output_store = OutputStore()
