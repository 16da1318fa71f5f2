# Теория возмущений: взаимодействие, S-матрица, отображение Боголюбова, коцикл
