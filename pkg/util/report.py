"""Run output: JSON report files validated against the shipped schema, and plain-text tables."""
import functools
import json
import os
from typing import Any, Dict, List

import jsonschema
import numpy as np
import pandas as pd

REPORT_VERSION = "1.0"
SCHEMA_PATH = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "schemas", "run_report.schema.json"
)


def json_default(obj: Any) -> Any:
    """Numpy scalars and arrays (galois arrays included) and literals to plain JSON."""
    if isinstance(obj, np.ndarray):
        return np.asarray(obj.view(np.ndarray)).tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return str(obj)


def normalize(data: Any) -> Any:
    """Round trip through JSON so every value is a plain Python type."""
    return json.loads(json.dumps(data, default=json_default))


@functools.lru_cache(maxsize=None)
def load_schema() -> Dict[str, Any]:
    with open(SCHEMA_PATH, "r") as schema_file:
        schema: Dict[str, Any] = json.load(schema_file)
    return schema


def validate_report(report: Dict[str, Any]) -> None:
    """Raise jsonschema.ValidationError when the report does not follow the schema."""
    jsonschema.validate(instance=report, schema=load_schema())


def get_out_file_name(out_file_name: str, param: Dict[str, Any]) -> str:
    if param.get("output_dir"):
        output_dir = param["output_dir"]
        if not os.path.exists(output_dir):
            os.makedirs(output_dir)
        out_file_name = os.path.join(output_dir, out_file_name)
    return out_file_name


def write_json(file_name: str, data: Any) -> None:
    with open(file_name, "w") as out_file:
        json.dump(data, out_file, indent=1, sort_keys=True, default=json_default)


def write_run_output(report: Dict[str, Any], param: Dict[str, Any]) -> List[str]:
    """Write settings and report files, plus the --json copy when requested.

    :param report: Validated run report
    :type report: dict
    :param param: Settings
    :type param: dict
    :return: Names of the written files
    :rtype: list
    """
    out_file_name = get_out_file_name("rankmetric_{}".format(report["command"]), param)
    written = []
    _out_file_name = "{}_settings.json".format(out_file_name)
    write_json(_out_file_name, {k: v for k, v in param.items()})
    written.append(_out_file_name)

    _out_file_name = "{}_report.json".format(out_file_name)
    write_json(_out_file_name, report)
    written.append(_out_file_name)

    if param.get("json"):
        write_json(param["json"], report)
        written.append(param["json"])
    return written


def format_table(rows: List[Dict[str, Any]]) -> str:
    if not rows:
        return ""
    return str(pd.DataFrame(rows).to_string(index=False))


def print_table(rows: List[Dict[str, Any]]) -> None:
    table = format_table(rows)
    if table:
        print(table)
