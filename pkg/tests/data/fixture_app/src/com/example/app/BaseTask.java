package com.example.app;

public class BaseTask {
    protected SubTask fallback;

    public void execute() {
        prepare();
    }

    protected void prepare() {
    }
}
