"""
Root URL configuration for the photodetection simulator.
"""

from django.urls import path, include

urlpatterns = [
    path('', include('photodetection.urls')),
]
