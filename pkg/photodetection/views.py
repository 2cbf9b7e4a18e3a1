"""
API views mirroring the photodetect management command.
"""

from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView

from detectors.serializers import DetectorParamsResponseSerializer
from detectors.services import describe_params

from .exceptions import ImpossibleOutcome, PhotodetectionError
from .serializers import (
    PosteriorRequestSerializer,
    PosteriorRowSerializer,
    RunConfigSerializer,
    SimulateRequestSerializer,
    SimulationRowSerializer,
    SweepRequestSerializer,
    SweepRowSerializer,
    ValidationCheckSerializer,
)
from .services import (
    RunConfig, posterior_table, simulate_table, sweep_eps_table, validation_report,
)


def _error_response(exc):
    code = (status.HTTP_422_UNPROCESSABLE_ENTITY if isinstance(exc, ImpossibleOutcome)
            else status.HTTP_400_BAD_REQUEST)
    return Response({'error': str(exc)}, status=code)


class ValidateView(APIView):
    """POST /validate: Run every constraint and completeness check."""

    def post(self, request):
        serializer = RunConfigSerializer(data=request.data)
        if not serializer.is_valid():
            return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

        cfg = RunConfig.from_validated(serializer.validated_data)
        checks = validation_report(cfg)
        passed = all(c.passed for c in checks)

        response_data = {
            'passed': passed,
            'checks': ValidationCheckSerializer([c.as_row() for c in checks], many=True).data,
        }
        if passed:
            response_data['detector'] = DetectorParamsResponseSerializer(
                describe_params(cfg.detector_params())
            ).data
        code = status.HTTP_200_OK if passed else status.HTTP_422_UNPROCESSABLE_ENTITY
        return Response(response_data, status=code)


class PosteriorView(APIView):
    """POST /posterior: Numeric grid posterior next to the closed form."""

    def post(self, request):
        serializer = PosteriorRequestSerializer(data=request.data)
        if not serializer.is_valid():
            return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

        data = serializer.validated_data
        try:
            rows = posterior_table(RunConfig.from_validated(data['config']), data['xi'])
        except PhotodetectionError as e:
            return _error_response(e)

        return Response(PosteriorRowSerializer(rows, many=True).data, status=status.HTTP_200_OK)


class SweepEpsView(APIView):
    """POST /sweep-eps: Posterior density at theta as ε_g varies."""

    def post(self, request):
        serializer = SweepRequestSerializer(data=request.data)
        if not serializer.is_valid():
            return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

        data = serializer.validated_data
        try:
            rows = sweep_eps_table(
                RunConfig.from_validated(data['config']),
                start=data['start'],
                stop=data['stop'],
                step=data['step'],
                theta=data['theta'],
                xi=data['xi'],
            )
        except PhotodetectionError as e:
            return _error_response(e)
        return Response(SweepRowSerializer(rows, many=True).data, status=status.HTTP_200_OK)


class SimulateView(APIView):
    """POST /simulate: Sample one measurement trajectory."""

    def post(self, request):
        serializer = SimulateRequestSerializer(data=request.data)
        if not serializer.is_valid():
            return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

        data = serializer.validated_data
        try:
            rows = simulate_table(
                RunConfig.from_validated(data['config']), data['rounds'], data['theta']
            )
        except PhotodetectionError as e:
            return _error_response(e)

        return Response(SimulationRowSerializer(rows, many=True).data, status=status.HTTP_200_OK)
