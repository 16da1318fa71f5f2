# Наборы проверок verify
