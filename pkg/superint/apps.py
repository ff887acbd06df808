from django.apps import AppConfig


class SuperintConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "superint"
    verbose_name = "Reduced superintegrals"
