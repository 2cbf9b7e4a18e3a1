"""
Celery tasks for fanning independent evaluations out to workers.
"""

from celery import shared_task


@shared_task(name='photodetection.tasks.evaluate_sweep_point')
def evaluate_sweep_point(config_data, eps_g, theta, xi):
    """
    One ε_g point of the efficiency sweep.

    ``config_data`` is ``RunConfig.as_dict()``; the returned row is JSON-safe.
    """
    from photodetection.services import RunConfig, sweep_eps_point

    cfg = RunConfig.from_validated(config_data)
    return sweep_eps_point(cfg, eps_g, theta, xi)
