from django.apps import AppConfig


class EnsemblesMcConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "ensembles_mc"
    verbose_name = "Monte Carlo ensembles"
