# Общие утилиты qstfield: ошибки и квадратуры
