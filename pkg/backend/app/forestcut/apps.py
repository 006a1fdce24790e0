from django.apps import AppConfig


class ForestCutConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "app.forestcut"

    def ready(self):
        """Import tasks when app is ready."""
        import app.forestcut.tasks  # noqa
