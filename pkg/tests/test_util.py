import os
import unittest

import jsonschema
import numpy as np

from algebra import fieldtower as ft
from codes import codes as cd
from util import report as rp
from util.utils import ElementLiteral, parse_code, parse_element


def get_f81():
    return ft.build_tower(3, 1, 2)


def get_report():
    return {
        "version": rp.REPORT_VERSION,
        "command": "mrd",
        "argv": ["mrd"],
        "tower": ft.tower_to_json(get_f81()),
        "inputs": {},
        "outputs": {"min_distance": 3},
        "seed": 0,
        "duration": 0.5,
    }


class TestLiterals(unittest.TestCase):
    def test_elements(self) -> None:
        tower = get_f81()
        self.assertEqual(parse_element("w").resolve(tower), tower.generator)
        self.assertEqual(parse_element("w^36").resolve(tower), tower.power(36))
        self.assertEqual(parse_element("-w^3").resolve(tower), -tower.power(3))
        self.assertEqual(parse_element("auto").resolve(tower), ft.find_gamma(tower))
        self.assertEqual(parse_element("7").resolve(tower), tower.GF(7))
        self.assertEqual(parse_element(7), ElementLiteral("raw", 7))
        self.assertEqual(str(parse_element("-w^3")), "-w^3")

    def test_bad_elements(self) -> None:
        for text in ("x^2", "w^", "w^-1", ""):
            with self.assertRaises(ValueError):
                parse_element(text)
        with self.assertRaises(ValueError):
            parse_element("81").resolve(get_f81())

    def test_codes(self) -> None:
        tower = get_f81()
        literal = parse_code("D:2:1:w")
        self.assertEqual(str(literal), "D:2:1:w^1")
        self.assertTrue(cd.codes_equal(literal.build(tower), cd.make_D(tower, 2, 1, tower.generator)))
        self.assertEqual(cd.code_label(parse_code("G:2:3").build(tower)), "G:2:3")
        self.assertEqual(cd.code_label(parse_code("H:2:1:w^3:1").build(tower)), "H:2:1:w^3:1")

    def test_bad_codes(self) -> None:
        for text in ("D:2:1", "G:2", "X:2:1", "H:2:1:w"):
            with self.assertRaises(ValueError):
                parse_code(text)
        with self.assertRaises(ValueError):
            parse_code("D:w:1:w").build(get_f81())


class TestReport(unittest.TestCase):
    def test_valid(self) -> None:
        rp.validate_report(rp.normalize(get_report()))

    def test_invalid(self) -> None:
        for key, value in (("version", "0.1"), ("command", "plot"), ("seed", "zero")):
            report = get_report()
            report[key] = value
            with self.assertRaises(jsonschema.ValidationError):
                rp.validate_report(report)
        report = get_report()
        report["extra"] = 1
        with self.assertRaises(jsonschema.ValidationError):
            rp.validate_report(report)

    def test_normalize(self) -> None:
        tower = get_f81()
        data = rp.normalize({"x": np.int64(3), "y": tower.GF([1, 2]), "z": np.bool_(True)})
        self.assertEqual(data, {"x": 3, "y": [1, 2], "z": True})

    def test_write_run_output(self) -> None:
        written = rp.write_run_output(get_report(), {"output_dir": "tmp", "json": None})
        self.assertEqual(len(written), 2)
        for file_name in written:
            self.assertTrue(os.path.exists(file_name))

    def test_table(self) -> None:
        table = rp.format_table([{"field": "F_q", "order": 3}])
        self.assertIn("F_q", table)
        self.assertEqual(rp.format_table([]), "")


if __name__ == "__main__":
    unittest.main()
