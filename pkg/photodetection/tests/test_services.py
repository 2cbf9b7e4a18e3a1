import json
import math
import tempfile
from pathlib import Path

from django.test import SimpleTestCase, override_settings

from photodetection.exceptions import ConfigError, ConstraintViolation
from photodetection.services import (
    RunConfig, load_run_config, parse_run_config, posterior_table, simulate_table,
    sweep_eps_point, sweep_eps_table, sweep_points, validation_report,
)

FIG2 = {'eps_g': 0.9, 'eps_e': 0.8, 'p1g': 0.85, 'p1e': 0.1}
IDEAL = {'eps_g': 1.0, 'eps_e': 1.0, 'p1g': 1.0, 'p1e': 0.0}


class RunConfigTests(SimpleTestCase):

    def test_defaults_come_from_settings(self):
        cfg = parse_run_config(FIG2)
        self.assertAlmostEqual(cfg.omega_tau, math.pi / 2)
        self.assertEqual(cfg.field_dim, 2)
        self.assertEqual(cfg.n_points, 181)
        self.assertEqual(cfg.format, 'csv')
        self.assertEqual(cfg.flip_fractions, ((0.0, 0.0),) * 3)

    @override_settings(PHOTODETECTION={'GRID_POINTS': 31, 'FIELD_DIM': 3, 'OMEGA_TAU': 1.0,
                                       'SEED': 5, 'OUTPUT_FORMAT': 'json'})
    def test_settings_override(self):
        cfg = parse_run_config(FIG2)
        self.assertEqual((cfg.n_points, cfg.field_dim, cfg.seed, cfg.format), (31, 3, 5, 'json'))

    def test_seed_override(self):
        self.assertEqual(parse_run_config({**FIG2, 'seed': 3}, seed=9).seed, 9)

    def test_unknown_key(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_run_config({**FIG2, 'eta': 0.5})
        self.assertIn('eta', str(ctx.exception))

    def test_field_dim_must_hold_a_photon(self):
        with self.assertRaises(ConfigError):
            parse_run_config({**FIG2, 'field_dim': 1})

    def test_non_finite_numbers_are_rejected(self):
        for key, value in (('omega_tau', float('inf')), ('eps_g', float('nan')),
                           ('p1e', float('-inf'))):
            with self.subTest(key=key), self.assertRaises(ConfigError) as ctx:
                parse_run_config({**FIG2, key: value})
            self.assertIn(key, str(ctx.exception))

        with self.assertRaises(ConfigError):
            parse_run_config({**FIG2, 'flip_fractions': [[0, 0], [float('nan'), 0], [0, 0]]})

    def test_dict_round_trip(self):
        cfg = parse_run_config({**FIG2, 'flip_fractions': [[0, 0.2], [0.1, 0], [0, 0]]})
        self.assertEqual(RunConfig.from_validated(cfg.as_dict()), cfg)
        json.dumps(cfg.as_dict())

    def test_load_reports_json_position(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'run.json'
            path.write_text('{\n  "eps_g": 0.9,\n}\n')
            with self.assertRaises(ConfigError) as ctx:
                load_run_config(path)
        self.assertIn('line 3', str(ctx.exception))

    def test_load_missing_file(self):
        with self.assertRaises(ConfigError):
            load_run_config('/nonexistent/run.json')


class ValidationReportTests(SimpleTestCase):

    def test_ideal_counter_passes(self):
        checks = validation_report(parse_run_config(IDEAL))
        self.assertEqual(len(checks), 13)
        self.assertTrue(all(c.passed for c in checks), [c for c in checks if not c.passed])

    def test_imperfect_detector_with_flips_passes(self):
        cfg = parse_run_config({**FIG2, 'field_dim': 5, 'omega_tau': 2.0,
                                'flip_fractions': [[0.1, 0.9], [0.5, 0.5], [1, 0]]})
        self.assertTrue(all(c.passed for c in validation_report(cfg)))

    def test_click_probability_above_efficiency_fails(self):
        checks = validation_report(parse_run_config({**FIG2, 'p1g': 0.95}))
        failed = {c.constraint for c in checks if not c.passed}
        self.assertIn('click-bound', failed)
        bound = next(c for c in checks if c.constraint == 'click-bound')
        self.assertAlmostEqual(bound.residual, 0.05, places=12)
        self.assertTrue(all(c.residual is None for c in checks[3:]))


class PosteriorTableTests(SimpleTestCase):

    def test_numeric_matches_closed_form(self):
        rows = posterior_table(parse_run_config(FIG2), 0)
        self.assertEqual(len(rows), 181)
        self.assertLessEqual(max(r['abs_diff'] for r in rows), 1e-9)
        self.assertAlmostEqual(rows[0]['analytic'], 2 / (3 * math.pi), places=4)

    def test_uninformative_detector(self):
        cfg = parse_run_config({'eps_g': 0.7, 'eps_e': 0.7, 'p1g': 0.4, 'p1e': 0.4})
        for row in posterior_table(cfg, 1):
            self.assertAlmostEqual(row['numeric'], 1 / math.pi, places=12)


class SweepTests(SimpleTestCase):

    def test_points_include_stop(self):
        points = sweep_points(0.0, 1.0, 0.05)
        self.assertEqual(len(points), 21)
        self.assertEqual(points[-1], 1.0)
        self.assertEqual(points[3], 0.15)

    def test_single_point(self):
        self.assertEqual(sweep_points(0.4, 0.4, 0.1), [0.4])

    def test_known_values(self):
        cfg = parse_run_config(FIG2)
        self.assertAlmostEqual(sweep_eps_point(cfg, 0.0, 0.0, 0)['density_at_theta'],
                               5 / (3 * math.pi), places=9)
        self.assertAlmostEqual(sweep_eps_point(cfg, 0.8, 0.0, 0)['density_at_theta'],
                               1 / math.pi, places=12)
        self.assertAlmostEqual(sweep_eps_point(cfg, 0.9, 0.0, 0)['density_at_theta'],
                               2 / (3 * math.pi), places=9)

    def test_density_falls_with_efficiency(self):
        rows = sweep_eps_table(parse_run_config(FIG2), 0.0, 1.0, 0.05, 0.0, 0)
        densities = [r['density_at_theta'] for r in rows]
        self.assertTrue(all(a > b for a, b in zip(densities, densities[1:])))
        self.assertTrue(all(r['error'] == '' for r in rows))

    def test_no_click_sweep_ignores_click_split(self):
        base = sweep_eps_table(parse_run_config(FIG2), 0.0, 0.95, 0.05, 0.0, 0)
        other = parse_run_config({**FIG2, 'p1g': 0.3, 'p1e': 0.6,
                                  'flip_fractions': [[0.2, 0.3], [0.5, 0.1], [0.9, 0.4]]})
        for a, b in zip(base, sweep_eps_table(other, 0.0, 0.95, 0.05, 0.0, 0)):
            self.assertAlmostEqual(a['density_at_theta'], b['density_at_theta'], places=12)

    def test_out_of_range_point_becomes_error_row(self):
        rows = sweep_eps_table(parse_run_config(FIG2), 1.0, 1.2, 0.1, 0.0, 0)
        self.assertEqual([r['eps_g'] for r in rows], [1.0, 1.1, 1.2])
        self.assertIsNotNone(rows[0]['density_at_theta'])
        self.assertIsNone(rows[1]['density_at_theta'])
        self.assertIn('efficiency-range', rows[1]['error'])


    def test_invalid_base_detector_is_rejected(self):
        cfg = parse_run_config({**FIG2, 'p1g': 0.95})
        with self.assertRaises(ConstraintViolation) as ctx:
            sweep_eps_table(cfg, 0.0, 0.5, 0.25, 0.0, 0)
        self.assertEqual(ctx.exception.constraint, 'click-bound')


class SimulateTableTests(SimpleTestCase):

    def test_ideal_counter_on_single_photon(self):
        rows = simulate_table(parse_run_config(IDEAL), 3, math.pi)
        self.assertEqual([r['round'] for r in rows], [1, 2, 3])
        self.assertEqual([r['xi'] for r in rows], [2, 1, 1])
        self.assertTrue(all(r['trace_check'] <= 1e-12 for r in rows))

    def test_seeded_runs_repeat(self):
        cfg = parse_run_config({**FIG2, 'seed': 17})
        self.assertEqual(simulate_table(cfg, 25, 1.3), simulate_table(cfg, 25, 1.3))
