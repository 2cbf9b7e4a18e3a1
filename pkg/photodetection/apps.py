from django.apps import AppConfig


class PhotodetectionConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'photodetection'
