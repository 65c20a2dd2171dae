from typing import List
import json
import os
import unittest

import main

ARGS: List[str] = ["-o", "tmp"]


class TestMain(unittest.TestCase):
    def test_one_field(self) -> None:
        _args = ARGS + ["-f", "tests/configurations/field.yml"]
        report = main.main(_args)
        self.assertEqual([row["order"] for row in report["outputs"]["fields"]], [3, 9, 81])
        self.assertTrue(os.path.exists(os.path.join("tmp", "rankmetric_field_report.json")))
        self.assertTrue(os.path.exists(os.path.join("tmp", "rankmetric_field_settings.json")))

    def test_one_mrd(self) -> None:
        _args = ARGS + ["-f", "tests/configurations/mrd_d_2_1.yml"]
        report = main.main(_args)
        self.assertEqual(report["outputs"]["label"], "D:2:1:w^1")
        self.assertEqual(report["outputs"]["min_distance"], 3)
        self.assertTrue(report["outputs"]["is_mrd"])
        self.assertEqual(report["seed"], 20)

    def test_one_mrd_cli_overrides_configuration(self) -> None:
        _args = ARGS + ["-f", "tests/configurations/mrd_d_2_1.yml", "--k", "1", "--s", "3"]
        report = main.main(_args)
        self.assertEqual(report["outputs"]["label"], "D:1:3:w^1")
        self.assertEqual(report["outputs"]["min_distance"], 4)

    def test_one_nucleus(self) -> None:
        _args = ARGS + ["-f", "tests/configurations/nucleus_right.yml"]
        report = main.main(_args)
        self.assertEqual(report["outputs"]["nucleus"]["size"], 9)
        self.assertTrue(report["outputs"]["is_field"])
        self.assertTrue(all(report["outputs"]["duality_identities"].values()))

    def test_one_equiv_quartic_tower(self) -> None:
        _args = ARGS + ["-f", "tests/configurations/equiv_quartic.yml"]
        report = main.main(_args)
        self.assertEqual(report["outputs"]["verdict"], "equivalent")
        self.assertEqual(report["tower"]["defining_poly"], [2, 0, 0, 2, 1])
        self.assertTrue(report["outputs"]["theorem"]["holds"])

    def test_one_equiv_inequivalent(self) -> None:
        _args = ARGS + ["-f", "tests/configurations/equiv_theorem5.yml"]
        report = main.main(_args)
        self.assertEqual(report["outputs"]["verdict"], "inequivalent")
        self.assertFalse(report["outputs"]["theorem"]["holds"])

    def test_one_hk(self) -> None:
        _args = ARGS + ["-f", "tests/configurations/hk.yml"]
        report = main.main(_args)
        self.assertTrue(report["outputs"]["presemifield"])
        self.assertTrue(report["outputs"]["left_matches_system"])

    def test_one_construct_from_flags(self) -> None:
        _args = ARGS + ["construct", "--family", "H", "--eta", "w^3", "--h", "1"]
        report = main.main(_args)
        self.assertEqual(report["outputs"]["label"], "H:2:1:w^3:1")
        self.assertEqual(len(report["outputs"]["generators"]), 8)

    def test_one_adjoint(self) -> None:
        report = main.main(ARGS + ["adjoint", "--gamma", "w"])
        self.assertTrue(report["outputs"]["equals_D"])
        self.assertEqual(report["outputs"]["expected_label"], "D:2:3:w^9")

    def test_one_dual(self) -> None:
        report = main.main(ARGS + ["dual", "--gamma", "w^5"])
        self.assertTrue(report["outputs"]["substitution_check"]["equivalent"])
        self.assertTrue(report["outputs"]["substitution_check"]["set_equal"])

    def test_one_mindist_sampled(self) -> None:
        report = main.main(ARGS + ["mindist", "--samples", "200", "--seed", "3"])
        self.assertEqual(report["outputs"]["mode"], "sampled")
        self.assertGreaterEqual(report["outputs"]["upper_bound"], 3)

    def test_one_json_copy(self) -> None:
        file_name = os.path.join("tmp", "spreadset_copy.json")
        if os.path.exists(file_name):
            os.remove(file_name)
        report = main.main(ARGS + ["spreadset", "--gamma", "w", "--json", file_name])
        with open(file_name, "r") as json_file:
            self.assertEqual(json.load(json_file), report)
        self.assertEqual(report["outputs"]["min_distance"], 4)

    def test_exit_codes(self) -> None:
        code, _ = main.run(ARGS + ["mrd", "--gamma", "w^2"])
        self.assertEqual(code, 2)
        code, _ = main.run(ARGS + ["mrd", "--gamma", "x^2"])
        self.assertEqual(code, 2)
        code, _ = main.run(ARGS + ["mrd", "--budget", "10"])
        self.assertEqual(code, 2)
        code, _ = main.run(ARGS + ["nucleus", "--side", "left"])
        self.assertEqual(code, 2)
        code, _ = main.run(ARGS)
        self.assertEqual(code, 2)
        with self.assertRaises(SystemExit):
            main.main(ARGS + ["mrd", "--k", "4"])


if __name__ == "__main__":
    unittest.main()
