import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "rmtk_project.settings")
django.setup()
