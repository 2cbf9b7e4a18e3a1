"""
Command-line front end for the photodetection simulator.

Usage:
    python manage.py photodetect --config run.json validate
    python manage.py photodetect --config run.json posterior --xi 1
    python manage.py photodetect --config run.json sweep-eps --start 0 --stop 1 --step 0.05 --theta 0 --xi 0
    python manage.py photodetect --config run.json --seed 7 simulate --rounds 20 --theta 3.14159

Global flags (--config, --seed, --out, --format) go before the subcommand.
Exit status: 0 success, 1 constraint/validation failure, 2 usage or parse error.
"""

import math

from django.core.management.base import BaseCommand, CommandError

from photodetection.exceptions import CONSTRAINT_RELATIONS, ConfigError, PhotodetectionError
from photodetection.output import render_rows
from photodetection.serializers import (
    PosteriorRowSerializer, SimulationRowSerializer, SweepRowSerializer,
)
from photodetection.services import (
    load_run_config, posterior_table, simulate_table, sweep_eps_table, sweep_points,
    validation_report,
)

EXIT_FAILURE = 1
EXIT_USAGE = 2


def _theta(value):
    theta = float(value)
    if not 0.0 <= theta <= math.pi:
        raise ValueError(value)
    return theta


class Command(BaseCommand):
    help = 'Validate detector settings, tabulate posteriors, sweep ε_g, or simulate trajectories'

    def add_arguments(self, parser):
        parser.add_argument('--config', required=True, help='Path to the JSON run configuration')
        parser.add_argument('--seed', type=int, help='Override the configured RNG seed')
        parser.add_argument('--out', help='Write output to this path instead of stdout')
        parser.add_argument('--format', choices=['csv', 'json'], help='Output format')

        subparsers = parser.add_subparsers(dest='subcommand', required=True)
        sub_kwargs = {'called_from_command_line': getattr(parser, 'called_from_command_line', None)}

        subparsers.add_parser('validate', help='Run the constraint and completeness checks',
                              **sub_kwargs)

        posterior = subparsers.add_parser('posterior', help='Numeric vs closed-form posterior',
                                          **sub_kwargs)
        posterior.add_argument('--xi', type=int, choices=[0, 1, 2], required=True)

        sweep = subparsers.add_parser('sweep-eps', help='Posterior density at theta vs ε_g',
                                      **sub_kwargs)
        sweep.add_argument('--start', type=float, required=True)
        sweep.add_argument('--stop', type=float, required=True)
        sweep.add_argument('--step', type=float, required=True)
        sweep.add_argument('--theta', type=_theta, default=0.0)
        sweep.add_argument('--xi', type=int, choices=[0, 1, 2], default=0)
        sweep.add_argument('--dispatch', action='store_true',
                           help='Evaluate sweep points on Celery workers')

        simulate = subparsers.add_parser('simulate', help='Sample a measurement trajectory',
                                         **sub_kwargs)
        simulate.add_argument('--rounds', type=int, required=True)
        simulate.add_argument('--theta', type=_theta, required=True)

    def handle(self, *args, **options):
        try:
            cfg = load_run_config(options['config'], seed=options['seed'])
        except ConfigError as e:
            raise CommandError(str(e), returncode=EXIT_USAGE)

        fmt = options['format'] or cfg.format
        out = options['out'] or cfg.out
        subcommand = options['subcommand']

        if subcommand == 'validate':
            self._validate(cfg)
            return

        try:
            if subcommand == 'posterior':
                text = render_rows(PosteriorRowSerializer, posterior_table(cfg, options['xi']), fmt)
            elif subcommand == 'sweep-eps':
                text = render_rows(SweepRowSerializer, self._sweep(cfg, options), fmt)
            else:
                if options['rounds'] < 1:
                    raise CommandError('--rounds must be at least 1.', returncode=EXIT_USAGE)
                text = render_rows(
                    SimulationRowSerializer,
                    simulate_table(cfg, options['rounds'], options['theta']),
                    fmt,
                )
        except PhotodetectionError as e:
            raise CommandError(str(e), returncode=EXIT_FAILURE)

        self._emit(text, out)

    def _validate(self, cfg):
        checks = validation_report(cfg)
        for check in checks:
            residual = 'not evaluated' if check.residual is None else f'{check.residual:.3e}'
            relation = CONSTRAINT_RELATIONS[check.constraint]
            line = f'{check.constraint:<20} {check.check:<40} residual={residual}  [{relation}]'
            if check.passed:
                self.stdout.write(self.style.SUCCESS(f'PASS  {line}'))
            else:
                self.stdout.write(self.style.ERROR(f'FAIL  {line}'))

        failed = [c for c in checks if not c.passed]
        if failed:
            raise CommandError(
                f'{len(failed)} check(s) failed: ' + ', '.join(c.constraint for c in failed),
                returncode=EXIT_FAILURE,
            )
        self.stdout.write(self.style.SUCCESS('All checks passed.'))

    def _sweep(self, cfg, options):
        if options['step'] <= 0 or options['stop'] < options['start']:
            raise CommandError('Sweep needs step > 0 and stop >= start.', returncode=EXIT_USAGE)
        cfg.detector_params()
        if not options['dispatch']:
            return sweep_eps_table(cfg, options['start'], options['stop'], options['step'],
                                   options['theta'], options['xi'])

        from celery import group
        from photodetection.tasks import evaluate_sweep_point

        points = sweep_points(options['start'], options['stop'], options['step'])
        self.stderr.write(f'Dispatching {len(points)} sweep points to Celery...')
        job = group([
            evaluate_sweep_point.s(cfg.as_dict(), eps_g, options['theta'], options['xi'])
            for eps_g in points
        ])
        return job.apply_async().get()

    def _emit(self, text, out):
        if out:
            with open(out, 'w', encoding='utf-8', newline='') as fh:
                fh.write(text)
            self.stderr.write(self.style.SUCCESS(f'Wrote {out}'))
        else:
            self.stdout.write(text, ending='')
