# Тесты qstfield
