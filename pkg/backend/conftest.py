"""Lets plain ``pytest`` run the Django test cases under backend/tests."""
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings")
# Run Celery tasks in-process under pytest, as settings already do for `manage.py test`.
os.environ.setdefault("CELERY_TASK_ALWAYS_EAGER", "1")
django.setup()
