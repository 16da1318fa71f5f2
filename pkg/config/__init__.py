# Конфигурация qstfield: значения по умолчанию и сценарии
