from collections.abc import Mapping

from django.conf import settings
from rest_framework import serializers

from detectors.serializers import DetectorInputSerializer, FiniteFloatField


def _setting(key):
    return lambda: settings.PHOTODETECTION[key]


class RunConfigSerializer(DetectorInputSerializer):
    """Flat run configuration: detector inputs plus interaction, grid, RNG and output."""
    omega_tau = FiniteFloatField(min_value=0.0, default=_setting('OMEGA_TAU'))
    field_dim = serializers.IntegerField(min_value=2, default=_setting('FIELD_DIM'))
    n_points = serializers.IntegerField(min_value=1, default=_setting('GRID_POINTS'))
    seed = serializers.IntegerField(min_value=0, default=_setting('SEED'))
    out = serializers.CharField(allow_null=True, default=None)
    format = serializers.ChoiceField(choices=['csv', 'json'], default=_setting('OUTPUT_FORMAT'))

    def to_internal_value(self, data):
        if isinstance(data, Mapping):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError(
                    {key: ['Unknown configuration key.'] for key in unknown}
                )
        return super().to_internal_value(data)


class PosteriorRequestSerializer(serializers.Serializer):
    """Serializer for POST /posterior request."""
    config = RunConfigSerializer()
    xi = serializers.ChoiceField(choices=[0, 1, 2])


class SweepRequestSerializer(serializers.Serializer):
    """Serializer for POST /sweep-eps request."""
    config = RunConfigSerializer()
    start = FiniteFloatField()
    stop = FiniteFloatField()
    step = FiniteFloatField()
    theta = FiniteFloatField(min_value=0.0, max_value=3.141592653589793)
    xi = serializers.ChoiceField(choices=[0, 1, 2])

    def validate_step(self, value):
        if value <= 0:
            raise serializers.ValidationError('step must be positive.')
        return value

    def validate(self, attrs):
        if attrs['stop'] < attrs['start']:
            raise serializers.ValidationError({'stop': 'stop must not be below start.'})
        return attrs


class SimulateRequestSerializer(serializers.Serializer):
    """Serializer for POST /simulate request."""
    config = RunConfigSerializer()
    rounds = serializers.IntegerField(min_value=1)
    theta = FiniteFloatField(min_value=0.0, max_value=3.141592653589793)


class ValidationCheckSerializer(serializers.Serializer):
    """One row of the validate report."""
    check = serializers.CharField()
    constraint = serializers.CharField()
    relation = serializers.CharField()
    passed = serializers.BooleanField()
    residual = serializers.FloatField(allow_null=True)


class PosteriorRowSerializer(serializers.Serializer):
    theta = serializers.FloatField()
    numeric = serializers.FloatField()
    analytic = serializers.FloatField()
    abs_diff = serializers.FloatField()


class SweepRowSerializer(serializers.Serializer):
    eps_g = serializers.FloatField()
    density_at_theta = serializers.FloatField(allow_null=True)
    error = serializers.CharField(allow_blank=True)


class SimulationRowSerializer(serializers.Serializer):
    round = serializers.IntegerField()
    xi = serializers.IntegerField()
    p0 = serializers.FloatField()
    p1 = serializers.FloatField()
    p2 = serializers.FloatField()
    trace_check = serializers.FloatField()
