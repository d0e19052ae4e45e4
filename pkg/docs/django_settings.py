SECRET_KEY = "."
INSTALLED_APPS = ["django.contrib.contenttypes", "pauliprobe"]
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"
