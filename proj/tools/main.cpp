// placeholder; full CLI lands with the pipeline module
int main() { return 0; }
