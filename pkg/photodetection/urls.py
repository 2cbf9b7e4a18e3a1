from django.urls import path
from .views import (
    PosteriorView,
    SimulateView,
    SweepEpsView,
    ValidateView,
)

urlpatterns = [
    path('validate', ValidateView.as_view(), name='validate'),
    path('posterior', PosteriorView.as_view(), name='posterior'),
    path('sweep-eps', SweepEpsView.as_view(), name='sweep-eps'),
    path('simulate', SimulateView.as_view(), name='simulate'),
]
