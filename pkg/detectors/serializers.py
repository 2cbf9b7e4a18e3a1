import math

from rest_framework import serializers


class FiniteFloatField(serializers.FloatField):
    """FloatField that also rejects inf and nan."""
    default_error_messages = {
        'invalid': 'A finite number is required.',
    }

    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        if not math.isfinite(value):
            self.fail('invalid')
        return value


def _no_flips():
    return [[0.0, 0.0] for _ in range(3)]


class DetectorInputSerializer(serializers.Serializer):
    """
    Detector inputs: efficiencies, ξ=1 marginals and flip fractions
    ``[[f0g, f0e], [f1g, f1e], [f2g, f2e]]``.

    Only shape and type are checked here; the constraint equations are
    enforced by ``detectors.services.build_params``.
    """
    eps_g = FiniteFloatField()
    eps_e = FiniteFloatField()
    p1g = FiniteFloatField()
    p1e = FiniteFloatField()
    flip_fractions = serializers.ListField(
        child=serializers.ListField(
            child=FiniteFloatField(), min_length=2, max_length=2
        ),
        min_length=3, max_length=3, default=_no_flips,
    )


class DetectorParamsResponseSerializer(serializers.Serializer):
    """Derived detector table: marginals p_ξμ and the |α_{ξ,μν}|² split."""
    eps_g = serializers.FloatField()
    eps_e = serializers.FloatField()
    marginals = serializers.ListField(child=serializers.ListField(child=serializers.FloatField()))
    table = serializers.ListField(
        child=serializers.DictField(child=serializers.FloatField())
    )
